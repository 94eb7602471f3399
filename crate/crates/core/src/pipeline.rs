//! End-to-end driver: monodromy → transversal → presentation → canonical form.

use crate::canonicalize::{canonicalize, CanonicalSurfaceForm};
use crate::monodromy::MonodromyData;
use crate::presentation::{eliminate, Presentation};
use crate::schreier::{RsBasis, SchreierTable, Strategy};
use crate::verify::{verify_all, VerificationReport};
use crate::Error;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PipelineOptions {
    pub strategy: Strategy,
    /// Reorder a full-cycle branch to the end and collect commutators.
    pub canonical: bool,
    pub verify: bool,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    /// The tuple the presentation was computed from (after any reordering).
    pub data: MonodromyData,
    /// Branch moved to the last position, if one was.
    pub reordered_from: Option<usize>,
    pub genus: usize,
    pub table: SchreierTable,
    pub basis: RsBasis,
    pub initial: Presentation,
    pub simplified: Presentation,
    pub canonical: Option<CanonicalSurfaceForm>,
    /// Set when a canonical form was requested but no branch is a full cycle.
    pub canonical_skipped: bool,
    pub report: Option<VerificationReport>,
}

pub fn run(data: &MonodromyData, opts: PipelineOptions) -> Result<PipelineOutput, Error> {
    let genus = data.genus()?;
    let mut reordered_from = None;
    let mut canonical_skipped = false;
    let data = match (opts.canonical, data.ns_candidate()) {
        (true, Some(l)) if l != data.branch_count() => {
            reordered_from = Some(l);
            data.reorder_last(l)?
        }
        (true, None) => {
            canonical_skipped = true;
            data.clone()
        }
        _ => data.clone(),
    };
    let table = SchreierTable::build(&data, opts.strategy)?;
    let basis = table.rs_generators();
    let initial = Presentation::initial(&data, &table, &basis)?;
    let simplified = eliminate(&initial)?;
    let canonical = if opts.canonical && !canonical_skipped {
        Some(canonicalize(&simplified, genus)?)
    } else {
        None
    };
    let report = opts
        .verify
        .then(|| verify_all(&data, &table, &initial, &simplified, canonical.as_ref()));
    Ok(PipelineOutput {
        data,
        reordered_from,
        genus,
        table,
        basis,
        initial,
        simplified,
        canonical,
        canonical_skipped,
        report,
    })
}
