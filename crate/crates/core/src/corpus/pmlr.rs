//! Client for Proceedings of Machine Learning Research volume pages.
//!
//! A volume index lists every paper with an `abs` link to its landing page;
//! the landing page carries the title in `<h1>` and the abstract in
//! `<div id="abstract">`. Papers whose page cannot be fetched or parsed are
//! skipped and counted. [`DirSource`] serves saved pages for offline use.

use std::path::{Path, PathBuf};
use std::time::Duration;

use scraper::{Html, Selector};

use super::{Corpus, Document, Label, Source};
use crate::error::{Error, Result};

/// Anything that can return the HTML body for a URL.
pub trait PageSource {
    fn fetch(&self, url: &str) -> Result<String>;
}

/// Plain HTTP GET.
pub struct HttpSource {
    agent: ureq::Agent,
}

impl Default for HttpSource {
    fn default() -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(30)))
            .build()
            .into();
        Self { agent }
    }
}

impl PageSource for HttpSource {
    fn fetch(&self, url: &str) -> Result<String> {
        let network = |e: ureq::Error| Error::Network {
            url: url.to_string(),
            message: e.to_string(),
        };
        let mut resp = self.agent.get(url).call().map_err(network)?;
        let content_type = resp
            .headers()
            .get("content-type")
            .and_then(|v| v.to_str().ok())
            .unwrap_or("")
            .to_ascii_lowercase();
        if !content_type.is_empty() && !content_type.contains("html") {
            return Err(Error::NotHtml(url.to_string()));
        }
        let body = resp.body_mut().read_to_string().map_err(network)?;
        ensure_html(url, body)
    }
}

/// Saved pages in a directory: the volume index as `index.html` and each
/// paper page under its original file name.
pub struct DirSource {
    dir: PathBuf,
}

impl DirSource {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }
}

impl PageSource for DirSource {
    fn fetch(&self, url: &str) -> Result<String> {
        let name = url.rsplit('/').next().unwrap_or(url);
        let path = self.dir.join(name);
        let body = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        ensure_html(url, body)
    }
}

fn ensure_html(url: &str, body: String) -> Result<String> {
    let head = body.chars().take(4096).collect::<String>().to_ascii_lowercase();
    if ["<html", "<!doctype html", "<body", "<div"]
        .iter()
        .any(|tag| head.contains(tag))
    {
        Ok(body)
    } else {
        Err(Error::NotHtml(url.to_string()))
    }
}

#[derive(Debug, Clone, Default)]
pub struct FetchReport {
    pub corpus: Corpus,
    /// Paper links that could not be fetched or had no parsable abstract.
    pub skipped: Vec<String>,
}

/// Fetch a volume index (or a single paper page) over HTTP.
pub fn fetch_pmlr_volume(volume_url: &str) -> Result<FetchReport> {
    fetch_volume(volume_url, &HttpSource::default())
}

/// Same as [`fetch_pmlr_volume`] for pages saved under `dir`.
pub fn load_pmlr_dir(dir: &Path) -> Result<FetchReport> {
    fetch_volume("index.html", &DirSource::new(dir))
}

pub fn fetch_volume(volume_url: &str, source: &dyn PageSource) -> Result<FetchReport> {
    let index = source.fetch(volume_url)?;
    let page = Html::parse_document(&index);

    let mut report = FetchReport::default();
    if let Some(doc) = parse_paper_page(&page, volume_url) {
        report.corpus.documents.push(doc);
        return Ok(report);
    }

    for link in paper_links(&page, volume_url) {
        let parsed = source
            .fetch(&link)
            .ok()
            .and_then(|html| parse_paper_page(&Html::parse_document(&html), &link));
        match parsed {
            Some(doc) if report.corpus.get(&doc.id).is_none() => report.corpus.documents.push(doc),
            Some(_) => {}
            None => report.skipped.push(link),
        }
    }
    if report.corpus.is_empty() {
        return Err(Error::NoPapersParsed(volume_url.to_string()));
    }
    Ok(report)
}

fn selector(css: &str) -> Selector {
    Selector::parse(css).expect("static selector")
}

fn squash(text: impl Iterator<Item = impl AsRef<str>>) -> String {
    let joined: String = text.map(|t| t.as_ref().to_string()).collect::<Vec<_>>().join(" ");
    joined.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn meta(page: &Html, name: &str) -> Option<String> {
    let sel = selector(&format!("meta[name=\"{name}\"]"));
    page.select(&sel)
        .next()
        .and_then(|m| m.value().attr("content"))
        .map(|c| c.trim().to_string())
        .filter(|c| !c.is_empty())
}

/// `abc21a` from `.../v139/abc21a.html`, plus the volume segment if any.
fn paper_key(url: &str) -> (Option<&str>, &str) {
    let mut parts = url.rsplit('/');
    let file = parts.next().unwrap_or(url);
    let name = file.strip_suffix(".html").unwrap_or(file);
    let volume = parts.next().filter(|v| is_volume_segment(v));
    (volume, name)
}

fn is_volume_segment(s: &str) -> bool {
    s.len() > 1 && s.starts_with('v') && s[1..].chars().all(|c| c.is_ascii_digit())
}

fn parse_paper_page(page: &Html, url: &str) -> Option<Document> {
    let abstract_text = page
        .select(&selector("#abstract"))
        .next()
        .map(|el| squash(el.text()))
        .filter(|t| !t.is_empty())?;
    let title = page
        .select(&selector("h1"))
        .next()
        .map(|el| squash(el.text()))
        .filter(|t| !t.is_empty())
        .or_else(|| meta(page, "citation_title"))?;
    let year = meta(page, "citation_publication_date")
        .and_then(|d| d.get(..4).and_then(|y| y.parse().ok()));
    let (volume, name) = paper_key(url);
    let id = match volume {
        Some(v) => format!("pmlr-{v}-{name}"),
        None => format!("pmlr-{name}"),
    };
    Some(Document {
        id,
        title,
        keywords: Vec::new(),
        abstract_text,
        source: Source::Pmlr,
        year,
        label: Label::Unlabeled,
    })
}

fn resolve(base: &str, href: &str) -> String {
    if href.starts_with("http://") || href.starts_with("https://") {
        return href.to_string();
    }
    if let Some(rest) = href.strip_prefix("//") {
        let scheme = base.split("://").next().unwrap_or("https");
        return format!("{scheme}://{rest}");
    }
    if href.starts_with('/') {
        if let Some((scheme, rest)) = base.split_once("://") {
            let host = rest.split('/').next().unwrap_or(rest);
            return format!("{scheme}://{host}{href}");
        }
        return href.to_string();
    }
    match base.rfind('/') {
        Some(i) => format!("{}{}", &base[..=i], href),
        None => href.to_string(),
    }
}

/// Landing-page links of every paper on a volume index, in page order.
fn paper_links(page: &Html, base: &str) -> Vec<String> {
    let mut links: Vec<String> = Vec::new();
    for a in page.select(&selector("a[href]")) {
        let href = a.value().attr("href").unwrap_or("").trim();
        let path = href.split(['?', '#']).next().unwrap_or("");
        if !path.ends_with(".html") || path.ends_with("index.html") {
            continue;
        }
        let in_volume = {
            let mut segs = path.rsplit('/');
            segs.next();
            match segs.next() {
                Some(seg) => is_volume_segment(seg),
                None => true,
            }
        };
        if !in_volume {
            continue;
        }
        let url = resolve(base, path);
        if !links.contains(&url) {
            links.push(url);
        }
    }
    links
}
