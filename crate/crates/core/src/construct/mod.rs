//! Constructions of nonunimodal f-vectors and independent re-verification of
//! their certificates.

pub mod algebraic;
pub mod combinatorial;
pub mod feasibility;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::macaulay::is_o_sequence;
use crate::transform::{h_to_f, is_cm_fvector};
use algebraic::{algebraic_h_template_with_denominator, layout_matches, spike_layout, AlgebraicPeakCertificate};
use combinatorial::{combinatorial_f_vector, components, has_exact_peaks, CombinatorialPeakCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum Certificate {
    Algebraic(AlgebraicPeakCertificate),
    Combinatorial(CombinatorialPeakCertificate),
}

/// Names of the invariants that failed, empty when the certificate holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub ok: bool,
    pub failures: Vec<String>,
}

struct Failures(Vec<String>);

impl Failures {
    fn check(&mut self, name: &str, holds: bool) {
        if !holds {
            self.0.push(name.to_string());
        }
    }

    fn finish(self) -> CertificateCheck {
        CertificateCheck {
            ok: self.0.is_empty(),
            failures: self.0,
        }
    }
}

fn verify_algebraic(c: &AlgebraicPeakCertificate) -> CertificateCheck {
    let mut out = Failures(Vec::new());
    let Ok(layout) = spike_layout(c.n_peaks) else {
        out.check("n_peaks", false);
        return out.finish();
    };
    let e = layout.dimension;
    out.check("dimension", c.dimension == e);
    out.check("epsilon_denominator", c.epsilon_denominator >= c.n_peaks as u64 * (e - 2));
    out.check(
        "n",
        c.n == BigInt::from(BigUint::from(c.m).pow(c.epsilon_denominator as u32)),
    );
    let template = algebraic_h_template_with_denominator(c.n_peaks, c.m, c.epsilon_denominator);
    out.check("h_template", template.as_ref().is_ok_and(|t| *t == c.h));
    out.check("f_transform", h_to_f(&c.h) == c.f);
    out.check("o_sequence", is_o_sequence(c.h.entries()).valid);
    out.check("cohen_macaulay", is_cm_fvector(&c.f).is_cm);
    out.check(
        "peak_layout",
        c.peak_indices == layout.peak_indices() && layout_matches(&c.f, &layout),
    );
    out.finish()
}

fn verify_combinatorial(c: &CombinatorialPeakCertificate) -> CertificateCheck {
    let mut out = Failures(Vec::new());
    if feasibility::validate_spacing(&c.k).is_err() {
        out.check("spacing", false);
        return out.finish();
    }
    let top = *c.k.last().unwrap();
    out.check("r_bound", c.r >= top);
    out.check("dimension", c.dimension + 1 == top);
    out.check(
        "a_positive",
        c.a.len() + 1 == c.k.len() && c.a.iter().all(|x| !x.is_zero()),
    );
    let formula = combinatorial_f_vector(&c.k, &c.a, c.r);
    out.check("f_formula", formula.as_ref().is_ok_and(|f| *f == c.f));
    out.check("components", c.a.len() + 1 == c.k.len() && c.components == components(&c.k, &c.a, c.r));
    out.check(
        "peak_layout",
        c.peak_indices == c.k.iter().map(|&x| x - 1).collect::<Vec<_>>() && has_exact_peaks(&c.f, &c.k),
    );
    out.finish()
}

/// Recomputes every derived field from the primary parameters.
pub fn verify_certificate(cert: &Certificate) -> CertificateCheck {
    match cert {
        Certificate::Algebraic(c) => verify_algebraic(c),
        Certificate::Combinatorial(c) => verify_combinatorial(c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{FVector, HVector};

    fn algebraic() -> AlgebraicPeakCertificate {
        algebraic::construct_algebraic(2, 2, 1000).unwrap()
    }

    fn bump(v: &[BigInt], i: usize) -> Vec<BigInt> {
        let mut v = v.to_vec();
        v[i] += 1;
        v
    }

    #[test]
    fn fresh_certificates_verify() {
        let a = Certificate::Algebraic(algebraic());
        assert_eq!(verify_certificate(&a), CertificateCheck { ok: true, failures: vec![] });
        let c = Certificate::Combinatorial(combinatorial::construct_combinatorial(&[4, 6], None).unwrap());
        assert!(verify_certificate(&c).ok);
    }

    #[test]
    fn perturbed_f_entry_is_named() {
        let mut c = algebraic();
        c.f = FVector::new(bump(c.f.entries(), 3)).unwrap();
        let check = verify_certificate(&Certificate::Algebraic(c));
        assert!(!check.ok);
        assert!(check.failures.contains(&"f_transform".to_string()));

        let mut c = combinatorial::construct_combinatorial(&[4, 6], None).unwrap();
        c.f = FVector::new(bump(c.f.entries(), 2)).unwrap();
        let check = verify_certificate(&Certificate::Combinatorial(c));
        assert_eq!(check.failures, vec!["f_formula".to_string()]);
    }

    #[test]
    fn moved_spike_is_caught() {
        let mut c = algebraic();
        let mut h = c.h.entries().to_vec();
        h.swap(1, 2);
        c.h = HVector::new(h).unwrap();
        c.f = h_to_f(&c.h);
        let check = verify_certificate(&Certificate::Algebraic(c));
        assert!(check.failures.contains(&"h_template".to_string()));
    }

    #[test]
    fn too_coarse_epsilon_is_rejected() {
        let mut c = algebraic();
        c.epsilon_denominator = 1;
        let check = verify_certificate(&Certificate::Algebraic(c));
        assert!(check.failures.contains(&"epsilon_denominator".to_string()));
        assert!(check.failures.contains(&"n".to_string()));
    }

    #[test]
    fn combinatorial_parameter_mutations() {
        let base = combinatorial::construct_combinatorial(&[4, 6], None).unwrap();
        let mut c = base.clone();
        c.a[0] = BigUint::zero();
        assert!(verify_certificate(&Certificate::Combinatorial(c)).failures.contains(&"a_positive".to_string()));
        let mut c = base.clone();
        c.k = vec![4, 5];
        assert_eq!(verify_certificate(&Certificate::Combinatorial(c)).failures, vec!["spacing".to_string()]);
        let mut c = base;
        c.r -= 1;
        let fails = verify_certificate(&Certificate::Combinatorial(c)).failures;
        assert!(fails.contains(&"f_formula".to_string()) && fails.contains(&"components".to_string()));
    }

    #[test]
    fn certificate_json_is_tagged() {
        let a = Certificate::Algebraic(algebraic());
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.starts_with("{\"construction\":\"algebraic\""));
        assert_eq!(serde_json::from_str::<Certificate>(&s).unwrap(), a);
    }
}
