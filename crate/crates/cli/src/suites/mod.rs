mod buildings;
mod forms;
mod groups;
mod lemmas;
mod steinberg;

use formlab_core::Result;

use crate::report::{CheckRecord, Status};
use crate::{Inputs, Suite};

pub(crate) struct Ctx<'a> {
    pub inputs: &'a Inputs,
    checks: Vec<CheckRecord>,
}

impl<'a> Ctx<'a> {
    pub fn new(inputs: &'a Inputs) -> Self {
        Ctx { inputs, checks: Vec::new() }
    }

    pub fn into_checks(self) -> Vec<CheckRecord> {
        self.checks
    }

    fn push(
        &mut self,
        name: impl Into<String>,
        status: Status,
        witness: Option<String>,
        counterexample: Option<String>,
    ) {
        self.checks.push(CheckRecord { name: name.into(), status, witness, counterexample });
    }

    /// Asserted check: the detail becomes the witness on success and the counterexample on failure.
    pub fn assert(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let d = Some(detail.into());
        if ok {
            self.push(name, Status::Pass, d, None);
        } else {
            self.push(name, Status::Fail, None, d);
        }
    }

    /// `None` means the property held.
    pub fn outcome(&mut self, name: impl Into<String>, failure: Option<String>, witness: impl Into<String>) {
        match failure {
            None => self.push(name, Status::Pass, Some(witness.into()), None),
            Some(c) => self.push(name, Status::Fail, None, Some(c)),
        }
    }

    pub fn info(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, Status::Info, Some(detail.into()), None);
    }

    pub fn skip(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.push(name, Status::Skipped, Some(reason.into()), None);
    }
}

/// Counts instances of one property, keeping the first counterexample.
pub(crate) struct Tally {
    name: String,
    count: usize,
    failure: Option<String>,
}

impl Tally {
    pub fn new(name: impl Into<String>) -> Self {
        Tally { name: name.into(), count: 0, failure: None }
    }

    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.count += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
    }

    /// Nothing is emitted for a tally that saw no instances.
    pub fn finish(self, ctx: &mut Ctx) {
        if self.count > 0 {
            let w = format!("{} instances", self.count);
            ctx.outcome(self.name, self.failure, w);
        }
    }
}

pub(crate) fn dispatch(ctx: &mut Ctx) -> Result<()> {
    match ctx.inputs.suite {
        Suite::FormsAxioms => forms::forms_axioms(ctx),
        Suite::ComplementLemmas => lemmas::complement_lemmas(ctx),
        Suite::BuildingDims => buildings::building_dims(ctx),
        Suite::CohenMacaulay => buildings::cohen_macaulay(ctx),
        Suite::FiltrationComplex => buildings::filtration_complex(ctx),
        Suite::SteinbergCoinvariants => steinberg::steinberg_coinvariants(ctx),
        Suite::Kunneth => steinberg::kunneth(ctx),
        Suite::GroupCensus => groups::group_census(ctx),
        Suite::StabilizerSequences => groups::stabilizer_sequences(ctx),
        Suite::EuclideanHyperbolization => forms::euclidean_hyperbolization(ctx),
        Suite::StabilitySmoke => groups::stability_smoke(ctx),
    }
}
