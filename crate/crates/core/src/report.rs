//! Reports behind the command-line tool: classification, batch
//! verification and reproduction of the reference table rows.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::valuation;
use crate::error::{Error, Result};
use crate::group::{Budget, Config};
use crate::input::GroupSpec;
use crate::lie::{self, fermat_mersenne, FermatMersenne, OrderCondition, RowScale, TableRow};
use crate::perm::Perm;
use crate::picky::{irr_x, Certificate, Mode, PickyClass, SylowContext};

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassRow {
    pub class_index: usize,
    pub order: u64,
    pub centralizer: u64,
    #[serde(rename = "n_x")]
    pub n_x: u64,
    pub picky: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase", rename_all_fields = "camelCase", tag = "status")]
pub enum EngineOutcome {
    Confirmed { normalizer_order: String, classes: Vec<ClassRow> },
    AnalyticOnly { reason: String },
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Analytic {
    pub has_picky: bool,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_condition: Option<OrderCondition>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassifyReport {
    pub group: String,
    pub ell: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic: Option<Analytic>,
    pub engine: EngineOutcome,
    /// Whether the analytic verdict and the engine agree, when both exist.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistent: Option<bool>,
    /// For an "order at least k" prediction, whether the engine's picky
    /// classes are exactly the ℓ-classes of order at least k.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile_matches: Option<bool>,
}

impl ClassifyReport {
    pub fn picky_classes(&self) -> Option<Vec<&ClassRow>> {
        match &self.engine {
            EngineOutcome::Confirmed { classes, .. } => Some(classes.iter().filter(|c| c.picky).collect()),
            EngineOutcome::AnalyticOnly { .. } => None,
        }
    }
}

impl fmt::Display for ClassifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, ℓ = {}: ", self.group, self.ell)?;
        match &self.analytic {
            Some(a) if a.has_picky => write!(f, "picky: yes ({})", a.reason)?,
            Some(_) => f.write_str("picky: no")?,
            None => f.write_str("picky: no analytic prediction")?,
        }
        if let Some(p) = self.analytic.as_ref().and_then(|a| a.profile.as_ref()) {
            write!(f, "; predicted: {p}")?;
        }
        match (&self.engine, self.picky_classes()) {
            (EngineOutcome::Confirmed { .. }, Some(picky)) => {
                let orders: Vec<String> = picky.iter().map(|c| c.order.to_string()).collect();
                write!(f, "; engine-confirmed: {} classes", picky.len())?;
                if !picky.is_empty() {
                    write!(f, " (orders {})", orders.join(", "))?;
                }
            }
            (EngineOutcome::AnalyticOnly { reason }, _) => write!(f, "; analytic-only ({reason})")?,
            _ => {}
        }
        if self.consistent == Some(false) {
            f.write_str("; ENGINE DISAGREES WITH THE PREDICTION")?;
        }
        if self.profile_matches == Some(false) {
            f.write_str("; note: the engine's picky classes differ from the predicted order condition")?;
        }
        Ok(())
    }
}

fn analytic(spec: &GroupSpec, ell: u64) -> Result<Option<Analytic>> {
    let Some(fs) = spec.family_spec(ell) else {
        return Ok(None);
    };
    let has = lie::has_picky(&fs)?;
    let reason = match (ell, fermat_mersenne(fs.q)) {
        (2, FermatMersenne::Neither) | (3, _) => {
            if has { "listed group".to_string() } else { "not listed".to_string() }
        }
        (_, kind) => kind.to_string(),
    };
    let profile = if has { Some(lie::predicted_picky_profile(&fs)?) } else { None };
    Ok(Some(Analytic {
        has_picky: has,
        reason,
        order_condition: profile.as_ref().map(|p| p.order_condition.clone()),
        profile: profile.map(|p| p.to_string()),
    }))
}

/// Runs `f`, turning a budget failure into `Ok(Err(reason))`.
fn within_budget<T>(f: impl FnOnce() -> Result<T>) -> Result<std::result::Result<T, String>> {
    match f() {
        Ok(v) => Ok(Ok(v)),
        Err(Error::BudgetExceeded(reason)) => Ok(Err(reason)),
        Err(e) => Err(e),
    }
}

/// The analytic prediction together with the engine's Sylow counts, when
/// the group fits the budget.
pub fn classify(spec: &GroupSpec, ell: u64, config: Config) -> Result<ClassifyReport> {
    let analytic = analytic(spec, ell)?;
    let engine = within_budget(|| {
        let g = spec.build(config)?;
        let ctx = SylowContext::new(&g, ell)?;
        let classes = ctx
            .ell_classes()?
            .into_iter()
            .map(|c| ClassRow {
                class_index: c.class_index,
                order: c.order,
                centralizer: c.centralizer_order,
                n_x: c.sylow_count,
                picky: c.is_picky(),
            })
            .collect();
        Ok(EngineOutcome::Confirmed { normalizer_order: ctx.normalizer().order().to_string(), classes })
    })?
    .unwrap_or_else(|reason| EngineOutcome::AnalyticOnly { reason });
    let mut report = ClassifyReport {
        group: spec.to_string(),
        ell,
        seed: config.seed,
        analytic,
        engine,
        consistent: None,
        profile_matches: None,
    };
    if let (Some(a), EngineOutcome::Confirmed { classes, .. }) = (&report.analytic, &report.engine) {
        report.consistent = Some(a.has_picky == classes.iter().any(|c| c.picky));
        if let Some(OrderCondition::AtLeast { order }) = a.order_condition {
            report.profile_matches = Some(classes.iter().all(|c| c.picky == (c.order >= order)));
        }
    }
    Ok(report)
}

/// Certificates for every picky class, computed in parallel and returned
/// in class order.
pub fn verify_all(ctx: &SylowContext, label: &str, mode: Mode) -> Result<Vec<Certificate>> {
    let classes = ctx.picky_classes()?;
    if classes.is_empty() {
        return Ok(Vec::new());
    }
    // Fill the shared tables before fanning out.
    ctx.group_table()?;
    ctx.local_table()?;
    classes
        .par_iter()
        .map(|pc| labelled(ctx.verify(pc, mode), label))
        .collect()
}

/// Certificate for the class of an ℓ-element `x` of `G`; refused unless `x`
/// is picky. Elements outside the fixed Sylow subgroup are replaced by a
/// conjugate inside it.
pub fn verify_element(ctx: &SylowContext, label: &str, x: &Perm, mode: Mode) -> Result<Certificate> {
    let pc: PickyClass = if ctx.sylow().is_member(x)? {
        ctx.class_of_element(x)?
    } else {
        // Every ℓ-class meets P, so a miss means x is not an ℓ-element.
        let c = ctx.group().class_of(x)?;
        ctx.ell_classes()?
            .into_iter()
            .find(|pc| pc.class_index == c)
            .ok_or(Error::NotEllElement { ell: ctx.ell() })?
    };
    labelled(ctx.verify(&pc, mode), label)
}

fn labelled(cert: Result<Certificate>, label: &str) -> Result<Certificate> {
    cert.map(|mut c| {
        c.group = label.to_string();
        c
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Reproduced,
    FixtureOnly,
    Mismatch,
    BudgetExceeded,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Reproduced => "reproduced",
            RowStatus::FixtureOnly => "fixture-only",
            RowStatus::Mismatch => "mismatch",
            RowStatus::BudgetExceeded => "budget-exceeded",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RowReport {
    pub table: u8,
    pub group: String,
    pub ell: u64,
    pub expected: String,
    pub status: RowStatus,
    pub detail: String,
}

/// `(o(x), |C_G(x)|, |Irr^x_{ℓ^i}| for i = 0, 1, …)` of one picky class.
type Signature = (u64, u64, Vec<u64>);

fn expected_signatures(rows: &[&TableRow]) -> Vec<Signature> {
    let mut out: Vec<Signature> = rows
        .iter()
        .flat_map(|r| {
            r.centralizers
                .iter()
                .flat_map(move |&(c, m)| (0..m).map(move |_| (r.element_order, c, r.irr_counts.clone())))
        })
        .collect();
    out.sort();
    out
}

fn engine_signatures(row: &TableRow, config: Config) -> Result<Vec<Signature>> {
    let real = row
        .realization
        .ok_or_else(|| Error::Unsupported(format!("{} has no realization", row.group)))?;
    let g = GroupSpec::classical(real.family, real.n, real.q).build(config)?;
    let ctx = SylowContext::new(&g, row.ell)?;
    let table = ctx.group_table()?;
    let mut out = Vec::new();
    for pc in ctx.picky_classes()? {
        let mut counts: Vec<u64> = Vec::new();
        for r in irr_x(table, &pc.representative)? {
            let i = valuation(r.degree, row.ell) as usize;
            if counts.len() <= i {
                counts.resize(i + 1, 0);
            }
            counts[i] += 1;
        }
        out.push((pc.order, pc.centralizer_order, counts));
    }
    out.sort();
    Ok(out)
}

/// Equal up to collapsing each count list to its sum.
fn same_totals(a: &[Signature], b: &[Signature]) -> bool {
    let total = |s: &[Signature]| {
        let mut v: Vec<(u64, u64, u64)> = s.iter().map(|(o, c, n)| (*o, *c, n.iter().sum())).collect();
        v.sort_unstable();
        v
    };
    total(a) == total(b)
}

fn describe(sigs: &[Signature]) -> String {
    let parts: Vec<String> = sigs
        .iter()
        .map(|(o, c, n)| {
            let n: Vec<String> = n.iter().map(u64::to_string).collect();
            format!("o={o} |C|={c} counts={}", n.join("/"))
        })
        .collect();
    if parts.is_empty() { "no picky classes".into() } else { parts.join("; ") }
}

/// One report per table row of the requested tables (1, 2 or 3).
/// `extended` enables the stretch budget for rows that need it.
pub fn table_report(tables: &[u8], extended: bool, config: Config) -> Result<Vec<RowReport>> {
    let mut out = Vec::new();
    for &id in tables {
        if id == 3 {
            out.push(RowReport {
                table: 3,
                group: "SU8(2)".into(),
                ell: 3,
                expected: format!("{} centralizer types", lie::fixtures().su8_rows().len()),
                status: RowStatus::FixtureOnly,
                detail: "group order beyond the desk budget".into(),
            });
            continue;
        }
        let (_, rows) = lie::fixtures()
            .table(id)
            .ok_or_else(|| Error::Malformed(format!("no table {id}")))?;
        let mut groups: BTreeMap<usize, Vec<&TableRow>> = BTreeMap::new();
        let mut first: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, r) in rows.iter().enumerate() {
            let key = *first.entry(r.group.as_str()).or_insert(i);
            groups.entry(key).or_default().push(r);
        }
        for lines in groups.values() {
            let row = lines[0];
            let (status, detail) = reproduce(lines, extended, config)?;
            for line in lines {
                out.push(RowReport {
                    table: id,
                    group: row.group.clone(),
                    ell: row.ell,
                    expected: line.summary(),
                    status,
                    detail: detail.clone(),
                });
            }
        }
    }
    Ok(out)
}

fn reproduce(lines: &[&TableRow], extended: bool, config: Config) -> Result<(RowStatus, String)> {
    let row = lines[0];
    match (row.status, row.realization) {
        (RowScale::FixtureOnly, _) | (_, None) => {
            let why = match &row.group_order {
                Some(o) => format!("no desk-scale realization (group order {o})"),
                None => "no desk-scale realization".into(),
            };
            return Ok((RowStatus::FixtureOnly, why));
        }
        (RowScale::Extended, _) if !extended => {
            return Ok((RowStatus::FixtureOnly, "extended budget required".into()));
        }
        _ => {}
    }
    let config = if row.status == RowScale::Extended { Config { budget: Budget::extended(), ..config } } else { config };
    let expected = expected_signatures(lines);
    Ok(match within_budget(|| engine_signatures(row, config))? {
        Ok(found) if found == expected => (RowStatus::Reproduced, describe(&found)),
        Ok(found) => {
            let mut detail = format!("engine: {}; table: {}", describe(&found), describe(&expected));
            if same_totals(&found, &expected) {
                detail.push_str("; classes and total |Irr^x| agree, the split by degree ℓ-part differs");
            }
            (RowStatus::Mismatch, detail)
        }
        Err(reason) => (RowStatus::BudgetExceeded, reason),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Classical;

    #[test]
    fn classify_sl2() {
        let r = classify(&GroupSpec::classical(Classical::SL, 2, 7), 2, Config::default()).unwrap();
        assert_eq!(r.consistent, Some(true));
        let picky = r.picky_classes().unwrap();
        assert!(picky.iter().all(|c| c.order >= 4 && c.n_x == 1));
        assert!(r.to_string().contains("picky: yes (Mersenne prime)"), "{r}");
        // The order-4 class lies in five Sylow 2-subgroups.
        assert_eq!(r.profile_matches, Some(false));
        let EngineOutcome::Confirmed { classes, .. } = &r.engine else { panic!("engine did not run") };
        assert_eq!(classes.iter().find(|c| c.order == 4).unwrap().n_x, 5);

        let r = classify(&GroupSpec::classical(Classical::SL, 2, 11), 2, Config::default()).unwrap();
        assert_eq!(r.consistent, Some(true));
        assert!(r.to_string().contains("picky: no"));

        assert!(matches!(
            classify(&GroupSpec::classical(Classical::SL, 2, 4), 2, Config::default()),
            Err(Error::CharacteristicClash { .. })
        ));
    }

    #[test]
    fn totals_ignore_the_degree_split() {
        let engine = vec![(8, 16, vec![8, 0, 4]), (8, 16, vec![8, 0, 4])];
        let table = vec![(8, 16, vec![12]), (8, 16, vec![12])];
        assert!(same_totals(&engine, &table));
        assert!(!same_totals(&engine, &[(8, 16, vec![12]), (8, 32, vec![12])]));
    }

    #[test]
    fn classify_over_budget_is_analytic_only() {
        let mut config = Config::default();
        config.budget.max_degree = 16;
        let r = classify(&GroupSpec::classical(Classical::SL, 2, 17), 2, config).unwrap();
        assert!(matches!(r.engine, EngineOutcome::AnalyticOnly { .. }));
        assert!(r.to_string().contains("analytic-only"));
        assert_eq!(r.consistent, None);
    }

    #[test]
    fn table_rows_without_realization_are_fixture_only() {
        let rows = table_report(&[2, 3], false, Config::default()).unwrap();
        assert!(rows.iter().filter(|r| r.group != "2.SU4(2)").all(|r| r.status == RowStatus::FixtureOnly));
        let sl4 = table_report(&[1], false, Config::default()).unwrap();
        assert_eq!(sl4[0].group, "SL4(3)");
        assert_eq!(sl4[0].status, RowStatus::FixtureOnly);
        assert_eq!(sl4[1].group, "SU3(3)");
        assert_eq!(sl4[1].status, RowStatus::Reproduced, "{}", sl4[1].detail);
    }
}
