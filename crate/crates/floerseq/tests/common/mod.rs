//! Shared helpers for the integration tests.

#![allow(dead_code)]

use floerseq::model::GradedRanks;
use floerseq::page::E1Page;
use floerseq::{presets, ManifoldSpec, Period};

pub fn preset(name: &str) -> ManifoldSpec {
    presets::all_presets()
        .into_iter()
        .find(|s| s.name == name)
        .unwrap_or_else(|| panic!("no preset named {name}"))
}

pub fn gr(pairs: &[(i64, u64)]) -> GradedRanks {
    GradedRanks::from_pairs(pairs.iter().copied())
}

/// Total ranks of the column at `period`, which must exist.
pub fn col(page: &E1Page, period: Period) -> GradedRanks {
    page.column(period)
        .unwrap_or_else(|| panic!("no column at {period} in {}", page.spec_name))
        .total()
}
