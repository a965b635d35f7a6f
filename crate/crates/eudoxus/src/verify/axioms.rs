//! Field and order axioms, checked on a corpus of constructed reals at
//! a finite resolution.
//!
//! Additive laws and the multiplicative identity hold pointwise on the
//! representations, so they are checked exactly. The remaining laws hold
//! only up to equivalence and are checked down to a tolerance via the
//! certified comparison machinery. The pi slope costs linear time per
//! evaluation, so equality-style checks involving pi run at a reduced
//! tolerance of 1e-4 and pi is excluded from the inverse law.

use super::report::{report, CheckReport};
use super::Scale;
use crate::real::{
    archimedean_witness, compare_within, sign_within, sup_finite, ComparisonOutcome, Real,
};
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

/// Check ids this suite must produce; the coverage meta-check enforces it.
pub const REQUIRED: &[&str] = &[
    "axioms/add-commutative",
    "axioms/add-associative",
    "axioms/add-identity",
    "axioms/add-inverse",
    "axioms/mul-commutative",
    "axioms/mul-associative",
    "axioms/mul-identity",
    "axioms/mul-inverse",
    "axioms/distributive",
    "axioms/order-trichotomy",
    "axioms/order-transitive",
    "axioms/order-translation",
    "axioms/order-scaling",
    "axioms/archimedean",
    "axioms/sup-bounds",
];

pub struct AxiomMember {
    pub name: String,
    pub value: Real,
    /// Linear-cost evaluation (pi): equality checks run at reduced
    /// tolerance, inverse checks skip it.
    pub heavy: bool,
    /// Known sign, used to pick instances for order/inverse checks.
    pub positive: bool,
    pub zero: bool,
}

impl AxiomMember {
    pub fn new(name: &str, value: Real) -> Self {
        AxiomMember {
            name: name.into(),
            value,
            heavy: false,
            positive: false,
            zero: false,
        }
    }

    pub fn heavy(mut self) -> Self {
        self.heavy = true;
        self
    }

    pub fn positive(mut self) -> Self {
        self.positive = true;
        self
    }

    pub fn zero(mut self) -> Self {
        self.zero = true;
        self
    }
}

pub fn default_corpus() -> Result<Vec<AxiomMember>> {
    let m = AxiomMember::new;
    Ok(vec![
        m("0", Real::integer(0)?).zero(),
        m("1", Real::integer(1)?).positive(),
        m("2", Real::integer(2)?).positive(),
        m("-2", Real::integer(-2)?),
        m("1/2", Real::rational(1, 2)?).positive(),
        m("-7/5", Real::rational(-7, 5)?),
        m("sqrt(2)", Real::sqrt_nat(2)?).positive(),
        m(
            "alpha",
            Real::from_slope(crate::constructors::quintic()?),
        )
        .positive(),
        m("e", Real::e()?).positive(),
        m("pi", Real::pi()?).positive().heavy(),
    ])
}

fn reduced(eps: &BigRational) -> BigRational {
    let floor = BigRational::new(BigInt::one(), BigInt::from(10_000));
    if *eps < floor {
        floor
    } else {
        eps.clone()
    }
}

fn eps_for(eps: &BigRational, heavy: bool) -> BigRational {
    if heavy {
        reduced(eps)
    } else {
        eps.clone()
    }
}

/// None when indistinguishable at the tolerance, else a witness.
fn must_equal(
    what: &str,
    x: &Real,
    y: &Real,
    eps: &BigRational,
) -> Result<Option<serde_json::Value>> {
    match compare_within(x, y, eps)? {
        ComparisonOutcome::Indistinguishable(_) => Ok(None),
        other => Ok(Some(json!({"instance": what, "outcome": format!("{other:?}")}))),
    }
}

pub fn run_axiom_checks(
    eps: &BigRational,
    seed: u64,
    scale: Scale,
) -> Result<Vec<CheckReport>> {
    run_axiom_checks_on(&default_corpus()?, eps, seed, scale)
}

pub fn run_axiom_checks_on(
    members: &[AxiomMember],
    eps: &BigRational,
    seed: u64,
    scale: Scale,
) -> Result<Vec<CheckReport>> {
    let indices: Vec<BigInt> = [1i64, 2, 3, 7, 64, 1000, -5, -999]
        .iter()
        .map(|n| BigInt::from(*n))
        .collect();
    let pair_budget = match scale {
        Scale::Small => 10usize,
        Scale::Full => 24,
    };
    let triple_budget = match scale {
        Scale::Small => 6usize,
        Scale::Full => 16,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut all_pairs = Vec::new();
    for i in 0..members.len() {
        for j in 0..members.len() {
            if i != j {
                all_pairs.push((i, j));
            }
        }
    }
    let mut all_triples = Vec::new();
    for i in 0..members.len() {
        for j in 0..members.len() {
            for k in 0..members.len() {
                all_triples.push((i, j, k));
            }
        }
    }
    all_pairs.shuffle(&mut rng);
    all_triples.shuffle(&mut rng);
    let pairs = &all_pairs[..pair_budget.min(all_pairs.len())];
    let triples = &all_triples[..triple_budget.min(all_triples.len())];

    let mut out = Vec::new();

    // Additive laws hold exactly on representatives.
    out.push(exact_law(
        "axioms/add-commutative",
        "(x + y)(n) = (y + x)(n) pointwise",
        pairs,
        &members,
        &indices,
        |x, y| Ok((x.add(y)?, y.add(x)?)),
    )?);
    out.push(exact_law3(
        "axioms/add-associative",
        "((x + y) + z)(n) = (x + (y + z))(n) pointwise",
        triples,
        &members,
        &indices,
        |x, y, z| Ok((x.add(y)?.add(z)?, x.add(&y.add(z)?)?)),
    )?);
    let zero = Real::integer(0)?;
    let one = Real::integer(1)?;
    out.push(exact_law_unary(
        "axioms/add-identity",
        "(x + 0)(n) = x(n) pointwise",
        &members,
        &indices,
        |x| Ok((x.add(&zero)?, x.clone())),
    )?);
    out.push(exact_law_unary(
        "axioms/add-inverse",
        "(x + (-x))(n) = 0 pointwise",
        &members,
        &indices,
        |x| Ok((x.add(&x.neg()?)?, zero.clone())),
    )?);
    out.push(exact_law_unary(
        "axioms/mul-identity",
        "(x * 1)(n) = (1 * x)(n) = x(n) pointwise",
        &members,
        &indices,
        |x| Ok((x.mul(&one)?, one.mul(x)?)),
    )?);

    // Multiplicative and distributive laws hold up to equivalence.
    let mut failure = None;
    let mut ran = 0;
    for (i, j) in pairs {
        let (a, b) = (&members[*i], &members[*j]);
        let tol = eps_for(eps, a.heavy || b.heavy);
        let what = format!("{} * {}", a.name, b.name);
        if let Some(w) = must_equal(&what, &a.value.mul(&b.value)?, &b.value.mul(&a.value)?, &tol)?
        {
            failure = Some(w);
            break;
        }
        ran += 1;
    }
    out.push(report(
        "axioms/mul-commutative",
        "x * y = y * x up to the tolerance",
        json!({"pairs": pairs.len()}),
        failure,
        json!({"pairs_checked": ran}),
    ));

    let mut failure = None;
    let mut ran = 0;
    for (i, j, k) in triples {
        let (a, b, c) = (&members[*i], &members[*j], &members[*k]);
        let tol = eps_for(eps, a.heavy || b.heavy || c.heavy);
        let lhs = a.value.mul(&b.value)?.mul(&c.value)?;
        let rhs = a.value.mul(&b.value.mul(&c.value)?)?;
        let what = format!("({} * {}) * {}", a.name, b.name, c.name);
        if let Some(w) = must_equal(&what, &lhs, &rhs, &tol)? {
            failure = Some(w);
            break;
        }
        ran += 1;
    }
    out.push(report(
        "axioms/mul-associative",
        "(x * y) * z = x * (y * z) up to the tolerance",
        json!({"triples": triples.len()}),
        failure,
        json!({"triples_checked": ran}),
    ));

    let mut failure = None;
    let mut ran = 0;
    for m in members.iter().filter(|m| !m.zero && !m.heavy) {
        let prod = m.value.mul(&m.value.inverse()?)?;
        let what = format!("{} * {}^-1", m.name, m.name);
        if let Some(w) = must_equal(&what, &prod, &one, eps)? {
            failure = Some(w);
            break;
        }
        ran += 1;
    }
    out.push(report(
        "axioms/mul-inverse",
        "x * x^-1 = 1 for nonzero x up to the tolerance (pi excluded: linear-cost evaluation)",
        json!({"members": ran, "excluded": ["0", "pi"]}),
        failure,
        json!({"members_checked": ran}),
    ));

    let mut failure = None;
    let mut ran = 0;
    for (i, j, k) in triples {
        let (a, b, c) = (&members[*i], &members[*j], &members[*k]);
        let tol = eps_for(eps, a.heavy || b.heavy || c.heavy);
        let lhs = a.value.mul(&b.value.add(&c.value)?)?;
        let rhs = a.value.mul(&b.value)?.add(&a.value.mul(&c.value)?)?;
        let what = format!("{} * ({} + {})", a.name, b.name, c.name);
        if let Some(w) = must_equal(&what, &lhs, &rhs, &tol)? {
            failure = Some(w);
            break;
        }
        ran += 1;
    }
    out.push(report(
        "axioms/distributive",
        "x * (y + z) = x*y + x*z up to the tolerance",
        json!({"triples": triples.len()}),
        failure,
        json!({"triples_checked": ran}),
    ));

    // Order laws.
    let mut failure = None;
    let mut ran = 0;
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            let (a, b) = (&members[i], &members[j]);
            let tol = eps_for(eps, a.heavy || b.heavy);
            let fwd = compare_within(&a.value, &b.value, &tol)?;
            let rev = compare_within(&b.value, &a.value, &tol)?;
            let consistent = matches!(
                (&fwd, &rev),
                (ComparisonOutcome::Less, ComparisonOutcome::Greater)
                    | (ComparisonOutcome::Greater, ComparisonOutcome::Less)
                    | (
                        ComparisonOutcome::Indistinguishable(_),
                        ComparisonOutcome::Indistinguishable(_)
                    )
            );
            if !consistent {
                failure = Some(json!({
                    "x": a.name, "y": b.name,
                    "forward": format!("{fwd:?}"), "reverse": format!("{rev:?}"),
                }));
            }
            ran += 1;
        }
    }
    out.push(report(
        "axioms/order-trichotomy",
        "exactly one of x < y, x > y, |x - y| <= tolerance holds, symmetrically",
        json!({"pairs": ran}),
        failure,
        json!({"pairs_checked": ran}),
    ));

    let mut failure = None;
    let mut ran = 0;
    for (i, j, k) in triples {
        let (a, b, c) = (&members[*i], &members[*j], &members[*k]);
        let tol = eps_for(eps, a.heavy || b.heavy || c.heavy);
        let ab = compare_within(&a.value, &b.value, &tol)?;
        let bc = compare_within(&b.value, &c.value, &tol)?;
        if ab == ComparisonOutcome::Less && bc == ComparisonOutcome::Less {
            let ac = compare_within(&a.value, &c.value, &tol)?;
            if ac != ComparisonOutcome::Less {
                failure = Some(json!({
                    "x": a.name, "y": b.name, "z": c.name, "x_vs_z": format!("{ac:?}"),
                }));
                break;
            }
            ran += 1;
        }
    }
    out.push(report(
        "axioms/order-transitive",
        "x < y and y < z imply x < z",
        json!({"triples_considered": triples.len()}),
        failure,
        json!({"strict_chains_checked": ran}),
    ));

    let mut failure = None;
    let mut ran = 0;
    for (i, j) in pairs {
        let (a, b) = (&members[*i], &members[*j]);
        let k = rng.gen_range(0..members.len());
        let c = &members[k];
        let tol = eps_for(eps, a.heavy || b.heavy || c.heavy);
        let before = compare_within(&a.value, &b.value, &tol)?;
        if matches!(before, ComparisonOutcome::Indistinguishable(_)) {
            continue;
        }
        let after = compare_within(&a.value.add(&c.value)?, &b.value.add(&c.value)?, &tol)?;
        if after != before {
            failure = Some(json!({
                "x": a.name, "y": b.name, "z": c.name,
                "before": format!("{before:?}"), "after": format!("{after:?}"),
            }));
            break;
        }
        ran += 1;
    }
    out.push(report(
        "axioms/order-translation",
        "x < y implies x + z < y + z",
        json!({"pairs": pairs.len()}),
        failure,
        json!({"strict_pairs_checked": ran}),
    ));

    let mut failure = None;
    let mut ran = 0;
    let two = Real::integer(2)?;
    let half = Real::rational(1, 2)?;
    for (i, j) in pairs {
        let (a, b) = (&members[*i], &members[*j]);
        let tol = eps_for(eps, a.heavy || b.heavy);
        let before = compare_within(&a.value, &b.value, &tol)?;
        if matches!(before, ComparisonOutcome::Indistinguishable(_)) {
            continue;
        }
        for c in [&two, &half] {
            let after = compare_within(&c.mul(&a.value)?, &c.mul(&b.value)?, &tol)?;
            if after != before {
                failure = Some(json!({
                    "x": a.name, "y": b.name,
                    "before": format!("{before:?}"), "after": format!("{after:?}"),
                }));
            }
        }
        let neg = compare_within(
            &a.value.neg()?,
            &b.value.neg()?,
            &tol,
        )?;
        let flipped = match before {
            ComparisonOutcome::Less => ComparisonOutcome::Greater,
            ComparisonOutcome::Greater => ComparisonOutcome::Less,
            ref other => other.clone(),
        };
        if neg != flipped {
            failure = Some(json!({
                "x": a.name, "y": b.name, "negated": format!("{neg:?}"),
            }));
        }
        if failure.is_some() {
            break;
        }
        ran += 1;
    }
    out.push(report(
        "axioms/order-scaling",
        "x < y implies c*x < c*y for c > 0, and -y < -x",
        json!({"pairs": pairs.len(), "scalars": ["2", "1/2", "-1"]}),
        failure,
        json!({"strict_pairs_checked": ran}),
    ));

    let mut failure = None;
    let mut ran = 0;
    let hundred = Real::integer(100)?;
    for m in members.iter().filter(|m| m.positive) {
        let n = archimedean_witness(&m.value, &hundred)?;
        let scaled = Real::integer(n.clone())?.mul(&m.value)?;
        let tol = eps_for(eps, m.heavy);
        if compare_within(&scaled, &hundred, &tol)? != ComparisonOutcome::Greater {
            failure = Some(json!({"x": m.name, "witness": n.to_string()}));
            break;
        }
        ran += 1;
    }
    out.push(report(
        "axioms/archimedean",
        "for positive x there is an integer N with N*x > 100, and the returned witness works",
        json!({"positive_members": ran}),
        failure,
        json!({"witnesses_verified": ran}),
    ));

    let mut failure = None;
    let set: Vec<Real> = vec![
        Real::rational(1, 2)?,
        Real::integer(1)?,
        Real::sqrt_nat(2)?,
    ];
    let names = ["1/2", "1", "sqrt(2)"];
    let sup = sup_finite(&set)?;
    let mut achieved = false;
    for (m, name) in set.iter().zip(names) {
        match compare_within(&sup, m, eps)? {
            ComparisonOutcome::Less => {
                failure = Some(json!({"member": name, "violation": "sup below member"}));
                break;
            }
            ComparisonOutcome::Indistinguishable(_) => achieved = true,
            ComparisonOutcome::Greater => {}
        }
    }
    if failure.is_none() && !achieved {
        failure = Some(json!({"violation": "sup exceeds every member: not least"}));
    }
    if failure.is_none() {
        // The sup of this set is sqrt(2): the difference has no sign.
        if !matches!(
            sign_within(&sup.sub(&set[2])?, eps)?,
            ComparisonOutcome::Indistinguishable(_)
        ) {
            failure = Some(json!({"violation": "sup of {1/2, 1, sqrt(2)} is not sqrt(2)"}));
        }
    }
    out.push(report(
        "axioms/sup-bounds",
        "sup of a finite set is an upper bound and is attained by some member",
        json!({"set": names}),
        failure,
        json!({"members": names.len()}),
    ));

    Ok(out)
}

/// Pointwise-exact binary law.
fn exact_law(
    id: &str,
    claim: &str,
    pairs: &[(usize, usize)],
    members: &[AxiomMember],
    indices: &[BigInt],
    law: impl Fn(&Real, &Real) -> Result<(Real, Real)>,
) -> Result<CheckReport> {
    let mut failure = None;
    'outer: for (i, j) in pairs {
        let (lhs, rhs) = law(&members[*i].value, &members[*j].value)?;
        for n in indices {
            if lhs.raw().evaluate(n)? != rhs.raw().evaluate(n)? {
                failure = Some(json!({
                    "x": members[*i].name, "y": members[*j].name, "n": n.to_string(),
                }));
                break 'outer;
            }
        }
    }
    Ok(report(
        id,
        claim,
        json!({"pairs": pairs.len(), "indices": indices.len()}),
        failure,
        json!({"pairs_checked": pairs.len()}),
    ))
}

/// Pointwise-exact ternary law.
fn exact_law3(
    id: &str,
    claim: &str,
    triples: &[(usize, usize, usize)],
    members: &[AxiomMember],
    indices: &[BigInt],
    law: impl Fn(&Real, &Real, &Real) -> Result<(Real, Real)>,
) -> Result<CheckReport> {
    let mut failure = None;
    'outer: for (i, j, k) in triples {
        let (lhs, rhs) = law(
            &members[*i].value,
            &members[*j].value,
            &members[*k].value,
        )?;
        for n in indices {
            if lhs.raw().evaluate(n)? != rhs.raw().evaluate(n)? {
                failure = Some(json!({
                    "x": members[*i].name, "y": members[*j].name,
                    "z": members[*k].name, "n": n.to_string(),
                }));
                break 'outer;
            }
        }
    }
    Ok(report(
        id,
        claim,
        json!({"triples": triples.len(), "indices": indices.len()}),
        failure,
        json!({"triples_checked": triples.len()}),
    ))
}

/// Pointwise-exact unary law.
fn exact_law_unary(
    id: &str,
    claim: &str,
    members: &[AxiomMember],
    indices: &[BigInt],
    law: impl Fn(&Real) -> Result<(Real, Real)>,
) -> Result<CheckReport> {
    let mut failure = None;
    'outer: for m in members {
        let (lhs, rhs) = law(&m.value)?;
        for n in indices {
            if lhs.raw().evaluate(n)? != rhs.raw().evaluate(n)? {
                failure = Some(json!({"x": m.name, "n": n.to_string()}));
                break 'outer;
            }
        }
    }
    Ok(report(
        id,
        claim,
        json!({"members": members.len(), "indices": indices.len()}),
        failure,
        json!({"members_checked": members.len()}),
    ))
}
