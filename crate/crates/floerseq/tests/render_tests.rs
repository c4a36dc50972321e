//! JSON round-trips, the emitted corpus, and the table renderers.

mod common;

use common::preset;
use floerseq::render::{self, Format};
use floerseq::{page, solver, Period};
use std::path::PathBuf;

#[test]
fn json_round_trip_preserves_every_preset() {
    for spec in floerseq::presets::all_presets() {
        let json = render::spec_to_json(&spec);
        let back = render::parse_spec(&json).unwrap_or_else(|e| {
            panic!("{}: {e}", spec.name);
        });
        assert_eq!(back, spec, "{}", spec.name);
    }
}

#[test]
fn corpus_files_are_byte_stable() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut seen = 0;
    for spec in floerseq::presets::all_presets() {
        let path = dir.join(format!("{}.json", spec.name));
        let on_disk = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, render::spec_to_json(&spec), "{}", spec.name);
        seen += 1;
    }
    assert_eq!(seen, 31);
}

#[test]
fn parser_rejects_malformed_documents() {
    assert!(render::parse_spec("{").is_err());
    // Unknown fields are an error, not silently dropped.
    let mut doc: serde_json::Value =
        serde_json::from_str(&render::spec_to_json(&preset("tcp1"))).unwrap();
    doc["unexpected"] = serde_json::json!(1);
    assert!(render::parse_spec(&doc.to_string()).is_err());
    // Weight 0 must be declared through dimc, not the weight map.
    let mut doc: serde_json::Value =
        serde_json::from_str(&render::spec_to_json(&preset("tcp1"))).unwrap();
    doc["components"][0]["weights"]["0"] = serde_json::json!(1);
    let err = render::parse_spec(&doc.to_string()).unwrap_err();
    assert!(err.to_string().contains("zero weight"), "{err}");
}

#[test]
fn format_parsing() {
    assert_eq!("ascii".parse::<Format>().unwrap(), Format::Ascii);
    assert_eq!("latex".parse::<Format>().unwrap(), Format::Latex);
    assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
    assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
    assert!("tsv".parse::<Format>().is_err());
}

#[test]
fn page_and_report_renderers_smoke() {
    let spec = preset("x_z3");
    let page = page::assemble_e1(&spec, Period::integer(1), true).unwrap();
    let ascii = render::render_page(&spec, &page, Format::Ascii);
    assert!(ascii.contains("H*(Y)"), "{ascii}");
    let latex = render::render_page(&spec, &page, Format::Latex);
    assert!(latex.contains("\\begin"), "{latex}");

    let report = solver::solve_filtration(&spec, &page, &spec.constraints).unwrap();
    let chain = render::render_report(&report, Format::Ascii);
    assert!(chain.starts_with("0 ⊂ "), "{chain}");
    assert!(chain.contains("K_2^2"), "{chain}");
    let csv = render::render_report(&report, Format::Csv);
    assert!(csv.lines().next().unwrap().contains("period"), "{csv}");
}

#[test]
fn full_pipeline_matches_manual_calls() {
    let spec = preset("s22");
    let (page, report) = render::full_pipeline(&spec, Period::integer(2)).unwrap();
    let manual_page = page::assemble_e1(&spec, Period::integer(2), true).unwrap();
    assert_eq!(page.columns.len(), manual_page.columns.len());
    let manual_report =
        solver::solve_filtration(&spec, &manual_page, &spec.constraints).unwrap();
    assert_eq!(report, manual_report);
}
