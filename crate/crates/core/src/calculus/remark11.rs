//! Closed-form audit of the one-dimensional example: kernel, admissibility,
//! the admissible general solution of `l_beta v = b`, and the residuals of
//! the published exponent and particular-solution formulas.

use num_traits::Zero;
use serde::Serialize;

use super::lbeta::{
    admissible, apply_lbeta, indicial_residual, indicial_roots, kernel_basis, particular_solution, Beta,
};
use super::surd::{format_rational, rational, Rational, SurdValue};
use super::term::TermSum;

#[derive(Clone, Debug, Serialize)]
pub struct IndicialReport {
    pub beta: Beta,
    pub derived_roots: Vec<SurdValue>,
    pub published_a1: SurdValue,
    pub published_a2: SurdValue,
    /// `l_beta x^{a1}` and `l_beta x^{a2}`.
    pub published_residuals: [TermSum; 2],
}

/// Published exponents `a1 = -(1/2 + sqrt(1/4 + beta))`, `a2 = -1/2 + sqrt(1/4 + beta)`.
pub fn published_exponents(beta: &Beta) -> (SurdValue, SurdValue) {
    let s = beta.discriminant_root();
    let half = SurdValue::ratio(1, 2);
    (-(&half + &s), &s - &half)
}

/// Published particular term: `-(b/(2 beta)) x^2` for `beta > 0`,
/// `-(b/2)(x^2 ln x - (3/2) x^2)` for `beta = 0`.
pub fn published_particular(beta: &Beta, b: &Rational) -> TermSum {
    if beta.is_zero() {
        let half_b = b / rational(2, 1);
        TermSum::monomial(-half_b.clone(), rational(2, 1), 1).add(&TermSum::monomial(
            half_b * rational(3, 2),
            rational(2, 1),
            0,
        ))
    } else {
        TermSum::monomial(-(b / (rational(2, 1) * beta.value())), rational(2, 1), 0)
    }
}

pub fn indicial_report(beta: &Beta) -> IndicialReport {
    let (a1, a2) = published_exponents(beta);
    let published_residuals = [
        apply_lbeta(beta, &TermSum::power(a1.clone())),
        apply_lbeta(beta, &TermSum::power(a2.clone())),
    ];
    IndicialReport {
        beta: beta.clone(),
        derived_roots: indicial_roots(beta),
        published_a1: a1,
        published_a2: a2,
        published_residuals,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelEntry {
    pub function: TermSum,
    pub display: String,
    pub admissible: bool,
    /// `l_beta` applied to the element (must be the empty sum).
    pub residual: TermSum,
}

#[derive(Clone, Debug, Serialize)]
pub struct Vieta {
    pub sum: SurdValue,
    pub product: SurdValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct Remark11Report {
    pub beta: Beta,
    pub b: String,
    pub derived_roots: Vec<SurdValue>,
    pub kernel: Vec<KernelEntry>,
    pub admissible: Vec<bool>,
    /// Admissible kernel elements: the free part of the admissible solution.
    pub admissible_kernel: Vec<TermSum>,
    pub particular: TermSum,
    pub particular_residual: TermSum,
    pub published_exponents: [SurdValue; 2],
    pub published_residuals: [TermSum; 2],
    pub published_exponent_vieta: Vieta,
    pub published_particular: TermSum,
    pub published_particular_residual: TermSum,
    pub discrepancies: Vec<String>,
}

impl Remark11Report {
    /// Every kernel element maps to zero and every derived root has zero residual.
    pub fn kernel_exact(&self) -> bool {
        self.kernel.iter().all(|k| k.residual.is_zero())
            && self
                .derived_roots
                .iter()
                .all(|a| indicial_residual(&self.beta, a).is_zero())
    }

    /// `l_beta(particular) == b` exactly.
    pub fn particular_exact(&self) -> bool {
        let b = crate::calculus::surd::parse_rational(&self.b).expect("formatted rational");
        let target = if b.is_zero() {
            TermSum::zero()
        } else {
            TermSum::constant(b)
        };
        self.particular_residual == target
    }
}

pub fn remark11_report(beta: &Beta, b: &Rational) -> Remark11Report {
    let indicial = indicial_report(beta);
    let kernel: Vec<KernelEntry> = kernel_basis(beta)
        .into_iter()
        .map(|f| {
            let term = &f.terms()[0];
            KernelEntry {
                display: f.to_string(),
                admissible: admissible(term),
                residual: apply_lbeta(beta, &f),
                function: f,
            }
        })
        .collect();
    let admissible_flags: Vec<bool> = kernel.iter().map(|k| k.admissible).collect();
    let admissible_kernel = kernel
        .iter()
        .filter(|k| k.admissible)
        .map(|k| k.function.clone())
        .collect();
    let particular = particular_solution(beta, b);
    let particular_residual = apply_lbeta(beta, &particular);
    let published_particular = published_particular(beta, b);
    let published_particular_residual = apply_lbeta(beta, &published_particular);

    let mut discrepancies = Vec::new();
    for (name, a, res) in [
        ("a1", &indicial.published_a1, &indicial.published_residuals[0]),
        ("a2", &indicial.published_a2, &indicial.published_residuals[1]),
    ] {
        if !res.is_zero() {
            discrepancies.push(format!(
                "published exponent {name} = {a} is not a kernel exponent: l_beta x^({a}) = {res}"
            ));
        }
    }
    let expect = if b.is_zero() {
        TermSum::zero()
    } else {
        TermSum::constant(b.clone())
    };
    if published_particular_residual != expect {
        discrepancies.push(format!(
            "published particular term {published_particular} gives l_beta = {published_particular_residual}, expected {}",
            format_rational(b)
        ));
    }

    let vieta = Vieta {
        sum: &indicial.published_a1 + &indicial.published_a2,
        product: &indicial.published_a1 * &indicial.published_a2,
    };

    Remark11Report {
        beta: beta.clone(),
        b: format_rational(b),
        derived_roots: indicial.derived_roots,
        admissible: admissible_flags,
        kernel,
        admissible_kernel,
        particular,
        particular_residual,
        published_exponents: [indicial.published_a1, indicial.published_a2],
        published_residuals: indicial.published_residuals,
        published_exponent_vieta: vieta,
        published_particular,
        published_particular_residual,
        discrepancies,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta0_b1() {
        let rep = remark11_report(&Beta::ratio(0, 1).unwrap(), &rational(1, 1));
        assert!(rep.kernel_exact());
        assert!(rep.particular_exact());
        let bad: Vec<String> = rep
            .kernel
            .iter()
            .filter(|k| !k.admissible)
            .map(|k| k.display.clone())
            .collect();
        assert_eq!(bad, vec!["1*x*ln(x)".to_string()]);
        assert_eq!(rep.particular, TermSum::monomial(rational(1, 2), rational(2, 1), 1));
        // printed beta = 0 particular has the opposite sign
        assert_eq!(rep.published_particular_residual, TermSum::constant(rational(-1, 1)));
    }

    #[test]
    fn beta_three_quarters_b0() {
        let rep = remark11_report(&Beta::ratio(3, 4).unwrap(), &rational(0, 1));
        let adm: Vec<String> = rep.admissible_kernel.iter().map(|t| t.to_string()).collect();
        assert_eq!(adm, vec!["1", "1*x", "1*x^(5/2)"]);
        assert_eq!(rep.admissible, vec![true, false, true, true]);
        assert!(rep.particular.is_zero());
    }

    #[test]
    fn beta2_audit() {
        let rep = remark11_report(&Beta::ratio(2, 1).unwrap(), &rational(0, 1));
        assert_eq!(rep.published_exponents[0], SurdValue::int(-2));
        assert_eq!(
            rep.published_residuals[0],
            TermSum::monomial(rational(60, 1), rational(-4, 1), 0)
        );
        assert!(!rep.discrepancies.is_empty());
        assert!(rep.kernel_exact());
        assert_eq!(rep.published_exponent_vieta.sum, SurdValue::int(-1));
        assert_eq!(rep.published_exponent_vieta.product, SurdValue::int(-2));
    }

    #[test]
    fn json_fields() {
        let rep = remark11_report(&Beta::ratio(1, 1).unwrap(), &rational(1, 1));
        let v = serde_json::to_value(&rep).unwrap();
        for key in [
            "beta",
            "derived_roots",
            "kernel",
            "admissible",
            "published_exponents",
            "published_residuals",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let root = &v["derived_roots"][1];
        assert_eq!(root["r"], "5");
        assert_eq!(root["q"], "-1/2");
    }
}
