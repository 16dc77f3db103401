//! JSON command layer. Every command returns a [`CommandResult`] whose status
//! maps onto the process exit code (0 success, 1 verification failed,
//! 2 invalid input).

use std::path::Path;
use std::time::Instant;

use num_integer::Integer;
use serde_json::{json, Value};

use crate::arith::distinct_prime_count;
use crate::bqf::{
    brute_equiv_oracle, narrow_class_number, pell_fundamental, wide_class_number,
    BinaryQuadraticForm, Equivalence,
};
use crate::counting::{
    fm_count, lambda_isometry_order, rank1_fm_count, rank1_formula, rank2_fm_count, CountingInput,
};
use crate::disc_form::{enumerate_isometries, fraction_string, genus_witness, DiscIsometry};
use crate::error::{Error, Result};
use crate::fm_rank1::{
    enumerate_partners, expected_partner_count, orthogonal_generator, residue_rigidity_violations,
    solve_hyperbolic_partner, SearchDomain,
};
use crate::lattice::{standard_lattice, IntegerLattice, StandardLattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    VerificationFailed,
    InvalidInput,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::VerificationFailed => 1,
            Status::InvalidInput => 2,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Success => "success",
            Status::VerificationFailed => "verification_failed",
            Status::InvalidInput => "invalid_input",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
}

impl CommandResult {
    fn checked(ok: bool, payload: Value) -> Self {
        CommandResult {
            status: if ok {
                Status::Success
            } else {
                Status::VerificationFailed
            },
            payload,
        }
    }

    pub fn invalid(err: &Error) -> Self {
        CommandResult {
            status: Status::InvalidInput,
            payload: json!({ "error": err.to_string() }),
        }
    }

    fn from_result(r: Result<CommandResult>) -> Self {
        r.unwrap_or_else(|e| CommandResult::invalid(&e))
    }

    /// `{"status": ..., "result": ...}`; keys are sorted so output is stable.
    pub fn render(&self, pretty: bool) -> String {
        let doc = json!({ "status": self.status.as_str(), "result": self.payload });
        if pretty {
            serde_json::to_string_pretty(&doc).expect("json values serialize")
        } else {
            serde_json::to_string(&doc).expect("json values serialize")
        }
    }

    pub fn render_payload(&self, pretty: bool) -> String {
        if pretty {
            serde_json::to_string_pretty(&self.payload).expect("json values serialize")
        } else {
            serde_json::to_string(&self.payload).expect("json values serialize")
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Context {
    /// Brute-force limit on discriminant group orders.
    pub bound: u64,
}

impl Default for Context {
    fn default() -> Self {
        Context {
            bound: crate::disc_form::DEFAULT_ISOMETRY_BOUND,
        }
    }
}

pub fn cmd_partners(n: u64) -> CommandResult {
    CommandResult::from_result((|| {
        let partners = enumerate_partners(n)?;
        let expected = expected_partner_count(n)?;
        let count = partners.len() as u64;
        let pairs: Vec<[u64; 2]> = partners.iter().map(|p| [p.r, p.s]).collect();
        let list: Vec<Value> = partners
            .iter()
            .map(|p| json!({ "r": p.r, "s": p.s, "mukai_vector": [p.r, 1, p.s] }))
            .collect();
        Ok(CommandResult::checked(
            count == expected,
            json!({
                "n": n,
                "count": count,
                "expected_count": expected,
                "pairs": pairs,
                "partners": list,
            }),
        ))
    })())
}

#[derive(Debug, Clone)]
pub enum CountMode<'a> {
    Rank1(u64),
    Rank2(u64),
    General(&'a Path),
}

pub fn cmd_count(ctx: &Context, mode: CountMode<'_>) -> CommandResult {
    CommandResult::from_result((|| match mode {
        CountMode::Rank1(n) => {
            let count = rank1_fm_count(n, ctx.bound)?;
            let formula = rank1_formula(n)?;
            Ok(CommandResult::checked(
                count == formula,
                json!({ "mode": "rank1", "n": n, "count": count, "formula": formula }),
            ))
        }
        CountMode::Rank2(p) => {
            let count = rank2_fm_count(p)?;
            let d = p as i64;
            let pell = pell_fundamental(d)?;
            Ok(CommandResult::checked(
                true,
                json!({
                    "mode": "rank2",
                    "p": p,
                    "count": count,
                    "class_number": wide_class_number(d)?,
                    "narrow_class_number": narrow_class_number(d)?,
                    "unit_norm": pell.norm_sign,
                }),
            ))
        }
        CountMode::General(path) => {
            let text = read(path)?;
            let input = CountingInput::from_json(&text)?;
            let result = fm_count(&input, ctx.bound)?;
            Ok(CommandResult::checked(
                true,
                json!({
                    "mode": "general",
                    "count": result.total,
                    "per_class": result.per_class,
                }),
            ))
        }
    })())
}

#[derive(Debug, Clone, Copy)]
pub enum VerifyTarget {
    /// Hyperbolic partners and orthogonal generators for every partner of `n`.
    Hyperbolic {
        n: u64,
    },
    /// Residue rigidity search; `signed` adds a non-asserting signed sweep.
    Rigidity {
        n: u64,
        bound: u64,
        signed: bool,
    },
    /// `|O(A_{Λ_n})|` and the quotient by `±id`.
    Nseq {
        n: u64,
    },
    All {
        nmax: u64,
    },
}

pub fn cmd_verify(ctx: &Context, target: VerifyTarget) -> CommandResult {
    CommandResult::from_result(match target {
        VerifyTarget::Hyperbolic { n } => verify_hyperbolic(n),
        VerifyTarget::Rigidity { n, bound, signed } => verify_rigidity(n, bound, signed),
        VerifyTarget::Nseq { n } => verify_lambda(ctx, n),
        VerifyTarget::All { nmax } => verify_all(ctx, nmax),
    })
}

fn to_i64(v: u64, what: &str) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::InvalidParameter(format!("{what} is too large")))
}

/// Checks every partner of `n` with the lattice pairing of `U ⊕ ⟨2n⟩`.
fn verify_hyperbolic(n: u64) -> Result<CommandResult> {
    let ni = to_i64(n, "n")?;
    let lattice = StandardLattice::ExtendedNs(ni).build()?;
    let mut checks = Vec::new();
    let mut all_ok = true;
    for p in enumerate_partners(n)? {
        let (r, s) = (p.r as i64, p.s as i64);
        let entry = match solve_hyperbolic_partner(ni, r, s, ni) {
            Ok(pair) => {
                let pi = orthogonal_generator(ni, &pair)?;
                let v = [r, 1, s];
                let u = [pair.l, pair.k, pair.m];
                let w = pi.coords();
                let pr = |x: &[i64], y: &[i64]| lattice.pairing_i64(x, y);
                let (vv, uu, uv) = (pr(&v, &v)?, pr(&u, &u)?, pr(&u, &v)?);
                let (wu, wv, ww) = (pr(&w, &u)?, pr(&w, &v)?, pr(&w, &w)?);
                let g = (pair.residue().rem_euclid(2 * n as i128)).gcd(&(2 * n as i128));
                let ok = vv == 0.into()
                    && uu == 0.into()
                    && uv == 1.into()
                    && wu == 0.into()
                    && wv == 0.into()
                    && ww == (2 * ni).into()
                    && g == 1;
                all_ok &= ok;
                json!({
                    "r": r, "s": s,
                    "u": u, "pi": w,
                    "v_v": vv.to_string(), "u_u": uu.to_string(), "u_v": uv.to_string(),
                    "pi_u": wu.to_string(), "pi_v": wv.to_string(), "pi_pi": ww.to_string(),
                    "gcd_residue_2n": g.to_string(),
                    "ok": ok,
                })
            }
            Err(e) => {
                all_ok = false;
                json!({ "r": r, "s": s, "ok": false, "error": e.to_string() })
            }
        };
        checks.push(entry);
    }
    Ok(CommandResult::checked(
        all_ok,
        json!({ "target": "hyperbolic", "n": n, "pairs_checked": checks.len(), "checks": checks }),
    ))
}

fn verify_rigidity(n: u64, bound: u64, signed: bool) -> Result<CommandResult> {
    let ni = to_i64(n, "n")?;
    let bi = to_i64(bound, "bound")?;
    let natural = residue_rigidity_violations(ni, bi, SearchDomain::Natural)?;
    let solutions = crate::fm_rank1::hyperbolic_solutions(ni, bi, SearchDomain::Natural)?.len();
    let mut payload = json!({
        "target": "rigidity",
        "n": n,
        "bound": bound,
        "solutions": solutions,
        "counterexamples": natural,
    });
    if signed {
        let sv = residue_rigidity_violations(ni, bi, SearchDomain::Signed)?;
        let ss = crate::fm_rank1::hyperbolic_solutions(ni, bi, SearchDomain::Signed)?.len();
        payload["signed_diagnostic"] = json!({
            "solutions": ss,
            "violation_count": sv.len(),
            "violations": sv,
        });
    }
    Ok(CommandResult::checked(natural.is_empty(), payload))
}

fn verify_lambda(ctx: &Context, n: u64) -> Result<CommandResult> {
    let order = lambda_isometry_order(n, ctx.bound)?;
    let tau = distinct_prime_count(n)?;
    let expected = 1u64 << tau;
    Ok(CommandResult::checked(
        order == expected,
        json!({
            "target": "nseq",
            "n": n,
            "isometry_group_order": order,
            "expected_order": expected,
            "quotient_order": order / 2,
        }),
    ))
}

fn check(name: &str, ok: bool, detail: Value) -> Value {
    json!({ "name": name, "ok": ok, "detail": detail })
}

/// Every exact check of the acceptance suite that does not need a
/// property-testing harness, over `n ≤ nmax`.
fn verify_all(ctx: &Context, nmax: u64) -> Result<CommandResult> {
    if nmax < 2 {
        return Err(Error::InvalidParameter("nmax must be at least 2".into()));
    }
    let mut checks = Vec::new();
    let started = Instant::now();

    let mut mismatches = Vec::new();
    for n in 2..=nmax {
        let a = enumerate_partners(n)?.len() as u64;
        let b = rank1_fm_count(n, ctx.bound)?;
        let c = lambda_isometry_order(n, ctx.bound)? / 2;
        let d = rank1_formula(n)?;
        if !(a == b && b == c && c == d) {
            mismatches
                .push(json!({ "n": n, "partners": a, "count": b, "quotient": c, "formula": d }));
        }
    }
    checks.push(check(
        "partner_count_agreement",
        mismatches.is_empty(),
        json!({ "range": [2, nmax], "mismatches": mismatches }),
    ));

    let taus = [(12, 2), (6, 2), (8, 1), (2, 1)];
    let tau_ok = taus
        .iter()
        .all(|&(n, t)| distinct_prime_count(n).ok() == Some(t));
    checks.push(check("distinct_prime_values", tau_ok, json!(taus)));

    let failed: Vec<u64> = (1..=nmax)
        .filter(|&n| verify_hyperbolic(n).map_or(true, |r| r.status != Status::Success))
        .collect();
    checks.push(check(
        "hyperbolic_partners",
        failed.is_empty(),
        json!({ "range": [1, nmax], "failed_n": failed }),
    ));

    let rig_max = nmax.min(20);
    let mut counter = Vec::new();
    for n in 1..=rig_max {
        let v = residue_rigidity_violations(n as i64, 12, SearchDomain::Natural)?;
        if !v.is_empty() {
            counter.push(json!({ "n": n, "counterexamples": v }));
        }
    }
    checks.push(check(
        "residue_rigidity",
        counter.is_empty(),
        json!({ "range": [1, rig_max], "bound": 12, "failures": counter }),
    ));

    let mut bad_orders = Vec::new();
    for n in 2..=nmax {
        let expected = 1usize << distinct_prime_count(n)?;
        let rank1 = standard_lattice("rank1", Some(2 * n as i64))?.discriminant_form()?;
        let o1 = enumerate_isometries(&rank1, ctx.bound)?.order();
        let o2 = lambda_isometry_order(n, ctx.bound)? as usize;
        if o1 != expected || o2 != expected {
            bad_orders.push(json!({ "n": n, "rank1": o1, "lambda": o2, "expected": expected }));
        }
    }
    checks.push(check(
        "isometry_group_orders",
        bad_orders.is_empty(),
        json!({ "range": [2, nmax], "mismatches": bad_orders }),
    ));

    let rank2: Vec<(u64, u64, u64)> = [(5, 1, 1), (13, 1, 1), (229, 3, 2)].to_vec();
    let mut rank2_ok = true;
    let mut rank2_detail = Vec::new();
    for (p, h, count) in rank2 {
        let got_h = wide_class_number(p as i64)?;
        let got = rank2_fm_count(p)?;
        rank2_ok &= got_h == h && got == count;
        rank2_detail.push(json!({ "p": p, "class_number": got_h, "count": got }));
    }
    checks.push(check("rank2_counts", rank2_ok, json!(rank2_detail)));

    let f1 = IntegerLattice::from_i64(&[[2, 15], [15, -2]])?;
    let f2 = IntegerLattice::from_i64(&[[6, 13], [13, -10]])?;
    let same = genus_witness(&f1, &f2, ctx.bound)?.is_some();
    let isometric = brute_equiv_oracle(
        &BinaryQuadraticForm::new(1, 15, -1)?,
        &BinaryQuadraticForm::new(3, 13, -5)?,
        20,
        Equivalence::Gl2,
    );
    checks.push(check(
        "genus_with_two_classes",
        same && !isometric,
        json!({ "same_genus": same, "isometric_within_bound_20": isometric }),
    ));

    let ok = checks.iter().all(|c| c["ok"] == json!(true));
    Ok(CommandResult::checked(
        ok,
        json!({
            "target": "all",
            "nmax": nmax,
            "checks": checks,
            "elapsed_ms": started.elapsed().as_millis() as u64,
        }),
    ))
}

#[derive(Debug, Clone)]
pub enum LatticeAction<'a> {
    Disc(&'a Path),
    Signature(&'a Path),
    GenusCheck(&'a Path, &'a Path),
    /// Emits the lattice file of a named standard lattice.
    Standard {
        name: &'a str,
        param: Option<i64>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_lattice(path: &Path) -> Result<IntegerLattice> {
    IntegerLattice::from_json(&read(path)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn matrix_json(m: &DiscIsometry) -> Value {
    json!(m.matrix())
}

pub fn cmd_lattice(ctx: &Context, action: LatticeAction<'_>) -> CommandResult {
    CommandResult::from_result((|| match action {
        LatticeAction::Disc(path) => {
            let l = load_lattice(path)?;
            let form = l.discriminant_form()?;
            let q_gram: Vec<Vec<String>> = form
                .q_gram()
                .iter()
                .map(|r| r.iter().map(fraction_string).collect())
                .collect();
            Ok(CommandResult::checked(
                true,
                json!({
                    "label": l.label(),
                    "rank": l.rank(),
                    "determinant": l.determinant().to_string(),
                    "group_order": form.group_order().to_string(),
                    "orders": form.orders(),
                    "q_gram": q_gram,
                }),
            ))
        }
        LatticeAction::Signature(path) => {
            let l = load_lattice(path)?;
            let sig = l.signature();
            Ok(CommandResult::checked(
                true,
                json!({ "label": l.label(), "pos": sig.positive, "neg": sig.negative }),
            ))
        }
        LatticeAction::GenusCheck(p1, p2) => {
            let (l1, l2) = (load_lattice(p1)?, load_lattice(p2)?);
            let (s1, s2) = (l1.signature(), l2.signature());
            let witness = genus_witness(&l1, &l2, ctx.bound)?;
            Ok(CommandResult::checked(
                true,
                json!({
                    "same_genus": witness.is_some(),
                    "signatures": [[s1.positive, s1.negative], [s2.positive, s2.negative]],
                    "witness": witness.as_ref().map(matrix_json),
                }),
            ))
        }
        LatticeAction::Standard { name, param } => {
            let l = standard_lattice(name, param)?;
            let text = l.to_json()?;
            let doc: Value =
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(CommandResult::checked(true, doc))
        }
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partners_command() {
        let r = cmd_partners(6);
        assert_eq!(r.status, Status::Success);
        assert_eq!(r.payload["count"], json!(2));
        assert_eq!(r.payload["pairs"], json!([[6, 1], [3, 2]]));
        assert_eq!(cmd_partners(1).payload["count"], json!(1));
        assert_eq!(cmd_partners(8).payload["count"], json!(1));
        assert_eq!(cmd_partners(0).exit_code(), 2);
    }

    #[test]
    fn count_command() {
        let ctx = Context::default();
        assert_eq!(
            cmd_count(&ctx, CountMode::Rank1(30)).payload["count"],
            json!(4)
        );
        assert_eq!(
            cmd_count(&ctx, CountMode::Rank2(5)).payload["count"],
            json!(1)
        );
        assert_eq!(
            cmd_count(&ctx, CountMode::Rank2(229)).payload["count"],
            json!(2)
        );
        assert_eq!(cmd_count(&ctx, CountMode::Rank2(7)).exit_code(), 2);
        assert_eq!(cmd_count(&ctx, CountMode::Rank1(1)).exit_code(), 2);
    }

    #[test]
    fn verify_command() {
        let ctx = Context::default();
        let r = cmd_verify(&ctx, VerifyTarget::Hyperbolic { n: 6 });
        assert_eq!(r.status, Status::Success);
        assert_eq!(r.payload["pairs_checked"], json!(2));
        let r = cmd_verify(
            &ctx,
            VerifyTarget::Rigidity {
                n: 6,
                bound: 10,
                signed: false,
            },
        );
        assert_eq!(r.status, Status::Success);
        assert_eq!(r.payload["counterexamples"], json!([]));
        let r = cmd_verify(&ctx, VerifyTarget::Nseq { n: 6 });
        assert_eq!(r.payload["isometry_group_order"], json!(4));
        assert_eq!(r.payload["quotient_order"], json!(2));
        assert_eq!(cmd_verify(&ctx, VerifyTarget::Nseq { n: 1 }).exit_code(), 2);
    }

    #[test]
    fn render_is_deterministic() {
        let a = cmd_partners(30).render(false);
        let b = cmd_partners(30).render(false);
        assert_eq!(a, b);
        assert!(a.starts_with(r#"{"result":{"count":4"#));
    }
}
