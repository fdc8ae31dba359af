//! Bundled example problems with their expected results.

use crate::reinterpret::NfStyle;

#[derive(Clone, Debug)]
pub struct Example {
    /// Short identifier used for filtering.
    pub key: String,
    pub title: String,
    pub formula: String,
    pub assumptions: Vec<String>,
    pub nf: NfStyle,
    pub expected: String,
    /// Must pass with the builtin backend; other entries are optional.
    pub required: bool,
}

fn vars(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn foralls(vs: &[String]) -> String {
    vs.iter().map(|v| format!("forall {v} . ")).collect()
}

/// `<v, w> = sum v_i * conj(w_i)`.
pub fn inner(v: &[String], w: &[String]) -> String {
    let terms: Vec<String> = v
        .iter()
        .zip(w)
        .map(|(a, b)| format!("({a})*conj({b})"))
        .collect();
    format!("({})", terms.join(" + "))
}

/// Matrix-vector product, rows given as term texts.
fn apply(a: &[Vec<String>], v: &[String]) -> Vec<String> {
    a.iter()
        .map(|row| {
            let t: Vec<String> = row.iter().zip(v).map(|(x, y)| format!("({x})*({y})")).collect();
            t.join(" + ")
        })
        .collect()
}

pub fn orthogonality(n: usize) -> Example {
    let v = vars("v", n);
    let w = vars("w", n);
    let expected: Vec<String> = v.iter().map(|x| format!("{x} == 0")).collect();
    Example {
        key: format!("orthogonality-{n}"),
        title: format!("Orthogonality (n = {n})"),
        formula: format!("{}{} == 0", foralls(&w), inner(&v, &w)),
        assumptions: vec![],
        nf: NfStyle::Conjugate,
        expected: expected.join(" and "),
        required: true,
    }
}

pub fn cauchy_schwarz(n: usize) -> Example {
    let v = vars("v", n);
    let w = vars("w", n);
    let vw = inner(&v, &w);
    Example {
        key: format!("cauchy-schwarz-{n}"),
        title: format!("Cauchy-Schwarz inequality (n = {n})"),
        formula: format!(
            "{}{vw}*conj({vw}) <= {}*{}",
            foralls(&w),
            inner(&v, &v),
            inner(&w, &w)
        ),
        assumptions: vec![],
        nf: NfStyle::Conjugate,
        expected: "T".into(),
        required: n <= 2,
    }
}

fn matrix2() -> Vec<Vec<String>> {
    vec![
        vec!["a11".into(), "a12".into()],
        vec!["a21".into(), "a22".into()],
    ]
}

const SELF_ADJOINT: &str = "a11 - conj(a11) == 0 and a12 - conj(a21) == 0 and a22 - conj(a22) == 0";

pub fn self_adjoint_1() -> Example {
    let v = vars("v", 2);
    let w = vars("w", 2);
    let a = matrix2();
    Example {
        key: "self-adjoint-1".into(),
        title: "Self-adjoint matrices, first formula".into(),
        formula: format!(
            "{}{}{} == {}",
            foralls(&v),
            foralls(&w),
            inner(&apply(&a, &v), &w),
            inner(&v, &apply(&a, &w))
        ),
        assumptions: vec![],
        nf: NfStyle::Conjugate,
        expected: SELF_ADJOINT.into(),
        required: true,
    }
}

pub fn self_adjoint_2() -> Example {
    let v = vars("v", 2);
    let a = matrix2();
    Example {
        key: "self-adjoint-2".into(),
        title: "Self-adjoint matrices, second formula".into(),
        formula: format!("{}Im({}) == 0", foralls(&v), inner(&apply(&a, &v), &v)),
        assumptions: vec![],
        nf: NfStyle::Conjugate,
        expected: SELF_ADJOINT.into(),
        required: true,
    }
}

pub fn density_matrix() -> Example {
    let v = vars("v", 2);
    let a = vec![
        vec!["Re(a)".to_string(), "b".to_string()],
        vec!["conj(b)".to_string(), "1 - Re(a)".to_string()],
    ];
    Example {
        key: "density-matrix".into(),
        title: "Density matrices".into(),
        formula: format!("{}{} >= 0", foralls(&v), inner(&apply(&a, &v), &v)),
        assumptions: vec![],
        nf: NfStyle::Cartesian,
        expected: "Re(b)^2 + Im(b)^2 <= Re(a)*(1 - Re(a))".into(),
        required: true,
    }
}

fn positive_real(names: &[&str]) -> Vec<String> {
    names
        .iter()
        .flat_map(|x| [format!("Re({x}) > 0"), format!("Im({x}) == 0")])
        .collect()
}

pub fn rc_high_pass() -> Example {
    let p = "R*C*s";
    let q = "(R*C*s + 1)";
    Example {
        key: "rc-high-pass".into(),
        title: "Gain of passive RC high-pass filter".into(),
        formula: format!(
            "forall s . Re(s) == 0 -> ({p})*conj({p}) < g^2*{q}*conj({q})"
        ),
        assumptions: positive_real(&["R", "C", "g"]),
        nf: NfStyle::Cartesian,
        expected: "Re(g)^2 - 1 >= 0".into(),
        required: true,
    }
}

pub fn active_rc() -> Example {
    let q = "(G1*G9*G4*G6*G8 + G1*G9*G5*G7*G2*s + G1*G9*G7*G1*G2*s^2)";
    let names = ["G1", "G2", "G3", "G4", "G5", "G6", "G7", "G8", "G9", "C1", "C2"];
    Example {
        key: "active-rc".into(),
        title: "Stability of active RC filter".into(),
        formula: format!("forall s . {q} == 0 -> Re(s) < 0"),
        assumptions: positive_real(&names),
        nf: NfStyle::Conjugate,
        expected: "T".into(),
        required: true,
    }
}

/// The worked reinterpretation example.
pub fn merging() -> Example {
    Example {
        key: "merging".into(),
        title: "Reinterpretation of real equations".into(),
        formula: "Re(x) == 0 and Im(x) == 0 and Re(y) == 0 and Im(y) > 0".into(),
        assumptions: vec![],
        nf: NfStyle::Conjugate,
        expected: "x == 0 and y + conj(y) == 0 and I*conj(y) - I*y > 0".into(),
        required: true,
    }
}

/// All examples, in presentation order.
pub fn corpus() -> Vec<Example> {
    let simple = |key: &str, title: &str, formula: &str, expected: &str| Example {
        key: key.into(),
        title: title.into(),
        formula: formula.into(),
        assumptions: vec![],
        nf: NfStyle::Conjugate,
        expected: expected.into(),
        required: true,
    };
    vec![
        simple(
            "cartesian",
            "Cartesian coordinates",
            "forall z . exists x . exists y . Im(x) == 0 and Im(y) == 0 and z == x + I*y",
            "T",
        ),
        simple("roots-1", "Roots of unity, first formula", "exists z . z^2 + 1 == 0", "T"),
        simple(
            "roots-2",
            "Roots of unity, second formula",
            "exists c . forall b . forall a . ((a == d and b == c) or (a == c and b == 1)) -> b == a^2",
            "d + 1 == 0 or d + I == 0 or d - 1 == 0 or d - I == 0",
        ),
        simple(
            "geometry",
            "Counterexample for geometry provers",
            "forall x1 . forall x2 . (x1^2 + x2^2 == 1 and x1 == 2) -> x2 == 1",
            "F",
        ),
        orthogonality(3),
        orthogonality(10),
        cauchy_schwarz(1),
        cauchy_schwarz(2),
        cauchy_schwarz(3),
        cauchy_schwarz(4),
        self_adjoint_1(),
        self_adjoint_2(),
        density_matrix(),
        rc_high_pass(),
        active_rc(),
        merging(),
    ]
}

/// Examples whose key contains `filter`.
pub fn select(filter: Option<&str>) -> Vec<Example> {
    corpus()
        .into_iter()
        .filter(|e| filter.is_none_or(|f| e.key.contains(f)))
        .collect()
}
