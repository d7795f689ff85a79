use super::{Base, CalcError, CalculusSpec, Flag, Precedence, RuleId};
use RuleId::*;

/// A named calculus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preset {
    pub name: String,
    pub spec: CalculusSpec,
}

type Row = (&'static str, &'static [RuleId], &'static [Flag]);

const TABLE: &[Row] = &[
    ("R12r", &[RefAx, Rep1R, Rep2R], &[]),
    ("R12r_eqr", &[RefAx, Rep1R, Rep2R], &[Flag::RightHandOnly]),
    ("R12rl", &[RefAx, Rep1R, Rep2R, Rep1L, Rep2L], &[]),
    (
        "R_scope",
        &[RefAx, Rep1L, Rep2L, Rep1R, Rep2R],
        &[Flag::ContextNonEqOnly, Flag::ContextEqOnly],
    ),
    (
        "R_scope_eqr",
        &[RefAx, Rep1L, Rep2L, Rep1R, Rep2R],
        &[Flag::ContextNonEqOnly, Flag::ContextEqOnly, Flag::RightHandOnly],
    ),
    ("R1rl", &[RefAx, Rep1R, Rep1L], &[]),
    ("R2rl", &[RefAx, Rep2R, Rep2L], &[]),
    ("R1rlPlus", &[RefAx, Rep1R, Rep1Lplus], &[]),
    ("R2rlPlus", &[RefAx, Rep2R, Rep2Lplus], &[]),
    (
        "R12prec_rlPlus",
        &[RefAx, Rep1R, Rep2R, Rep1Lplus, Rep2Lplus],
        &[Flag::Oriented],
    ),
    ("RefRep", &[RefL, Rep], &[]),
    ("RefRep2L", &[RefL, Rep2L], &[]),
    ("RefRep1L", &[RefL, Rep1L], &[]),
    ("S1", &[RefAx, LC, Rep2Lplus, Rep1R], &[]),
    ("S2", &[RefAx, LC, Rep1Lplus, Rep2R], &[]),
    ("EqCut", &[RefAx, Eq1, Eq2, Cut], &[]),
    ("EqCutFree", &[RefAx, Eq1, Eq2], &[]),
    ("CngCut", &[RefAx, CNG, Cut], &[]),
    ("CngOnly", &[RefAx, CNG], &[]),
    ("CngLCeq", &[RefAx, CNG, LCeq], &[]),
];

pub fn preset_names() -> Vec<&'static str> {
    TABLE.iter().map(|r| r.0).collect()
}

/// Looks up a preset; `Name@c`, `Name@i` and `Name@m` put it on a logical base.
pub fn preset(name: &str) -> Result<Preset, CalcError> {
    let (core, base) = match name.split_once('@') {
        None => (name, Base::None),
        Some((core, b)) => (
            core,
            match b {
                "c" => Base::G3c,
                "i" => Base::G3i,
                "m" => Base::G3m,
                "none" => Base::None,
                _ => return Err(CalcError::InvalidSpec(format!("unknown base `{b}`"))),
            },
        ),
    };
    let (_, rules, flags) = TABLE
        .iter()
        .find(|r| r.0 == core)
        .ok_or_else(|| CalcError::InvalidSpec(format!("unknown preset `{core}`")))?;
    let precedence = flags.contains(&Flag::Oriented).then_some(Precedence::TermHeight);
    let spec = CalculusSpec::new(base, rules.iter().copied(), flags.iter().copied(), precedence)?;
    Ok(Preset {
        name: name.to_string(),
        spec,
    })
}
