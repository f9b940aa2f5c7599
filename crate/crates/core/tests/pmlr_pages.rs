use std::path::Path;

use lexmap::corpus::pmlr::load_pmlr_dir;
use lexmap::corpus::Source;
use lexmap::Error;

fn data(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

#[test]
fn saved_volume_yields_parsable_papers_and_skips_the_rest() {
    let report = load_pmlr_dir(&data("pmlr_volume")).unwrap();
    let ids: Vec<&str> = report.corpus.documents.iter().map(|d| d.id.as_str()).collect();
    assert_eq!(ids, ["pmlr-v999-alpha23a", "pmlr-beta23b"]);
    assert_eq!(report.skipped, ["gamma23c.html"]);

    let alpha = &report.corpus.documents[0];
    assert_eq!(alpha.title, "Calibrated Fair Ranking");
    assert_eq!(alpha.year, Some(2023));
    assert_eq!(alpha.source, Source::Pmlr);
    assert!(alpha.abstract_text.starts_with("Rankings allocate exposure. We show that group fairness"));
    assert_eq!(report.corpus.documents[1].title, "Sparse Gradient Methods");
}

#[test]
fn index_without_paper_links_is_an_error() {
    assert!(matches!(load_pmlr_dir(&data("pmlr_empty")), Err(Error::NoPapersParsed(_))));
}

#[test]
fn missing_directory_is_an_io_error() {
    assert!(matches!(load_pmlr_dir(&data("no_such_volume")), Err(Error::Io { .. })));
}
