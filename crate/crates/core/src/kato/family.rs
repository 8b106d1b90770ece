use super::{Glue, GlueSite, KatoBase, KatoDatum, KatoError, MarkedRegion};
use crate::blowup::{BlowupSequence, Step};
use crate::dualgraph::quotient_chain;
use crate::numerics::{int, Rational};

/// The Kato datum over the cyclic quotient `1/(5k-3) (1, 2k-1)`, whose
/// resolution is the chain `E1, E2, E3` with self-intersections `(-3, -2, -k)`.
///
/// Blow up a free point of `E2` (prime `E3'`), a free point of `E3'` (prime
/// `E4'`) and `k - 1` free points of `E4'` (primes `D1'..`). The chain
/// `E2, E3', E4'` again reads `(-3, -2, -k)` and is the marked region.
/// The contracted curves are `C1` (germ of `E1`, closing up on `E1` itself),
/// `C3` (germ of `E3`, meeting `E1`) and `Dj` (germ of `Dj'`, meeting `E3`).
pub fn quotient_family_datum(k: i64) -> Result<KatoDatum, KatoError> {
    if k < 2 {
        return Err(KatoError::BadFamilyParameter(k));
    }
    let (p, q) = (5 * k as u64 - 3, 2 * k as u64 - 1);
    let mut seq = BlowupSequence::over_singularity(&quotient_chain(p, q)?)?;
    seq.push_step(Step::Free("E2".into()), Some("E3'"))?;
    seq.push_step(Step::Free("E3'".into()), Some("E4'"))?;
    let mut gluing = vec![glue("C1", "E1", "E1"), glue("C3", "E3", "E1")];
    for j in 1..k {
        let name = format!("D{j}'");
        seq.push_step(Step::Free("E4'".into()), Some(&name))?;
        gluing.push(glue(&format!("D{j}"), &name, "E3"));
    }
    let marked = MarkedRegion::Chain(vec!["E2".into(), "E3'".into(), "E4'".into()]);
    KatoDatum::new(KatoBase::Quotient { p, q }, seq, marked, gluing)
}

fn glue(tag: &str, owner: &str, target: &str) -> Glue {
    Glue { tag: tag.into(), owner: owner.into(), target: target.into(), site: GlueSite::Free }
}

impl KatoDatum {
    /// Coefficient of a contracted curve in the Jacobian divisor.
    ///
    /// With `O` the owner, `M` the marked prime meeting it and `B` the base
    /// prime sent to `M`: the valuation `ord_{B'}` of a free blow-up of `B` at
    /// the curve is sent to `ord` of the satellite blow-up of `O ∩ M`, so the
    /// coefficient is `(A(O∩M) - A(M)) - (A(B') - A(B))`.
    pub fn jacobian_curve_coefficient(&self, tag: &str) -> Result<Rational, KatoError> {
        let g = self
            .gluing
            .iter()
            .find(|g| g.tag == tag)
            .ok_or_else(|| KatoError::BadGluing(format!("no contracted curve tagged `{tag}`")))?;
        let marked = self.marked_primes();
        let near: Vec<String> =
            self.modification.neighbors(&g.owner).into_iter().filter(|n| marked.contains(n)).collect();
        let [m] = &near[..] else {
            return Err(KatoError::BadGluing(format!("`{}` must meet the marked region exactly once", g.owner)));
        };
        let b = self
            .correspondence
            .iter()
            .find(|(_, img)| img == m)
            .map(|(b, _)| b.clone())
            .ok_or_else(|| KatoError::NoCorrespondence(m.clone()))?;
        let a = |seq: &BlowupSequence, n: &str| seq.curve(n).expect("known prime").log_discrepancy.clone();
        let image = self.modification.apply_step(Step::Satellite(g.owner.clone(), m.clone()))?;
        let image_a = a(&image, &image.steps().last().expect("one step").created);
        let base = self.modification.truncate(0)?;
        let source = base.apply_step(Step::Free(b.clone()))?;
        let source_a = a(&source, &source.steps().last().expect("one step").created);
        Ok((image_a - a(&self.modification, m)) - (source_a - a(&base, &b)))
    }
}

/// Jacobian coefficients `(b1, b3, b)` of `C1`, `C3` and each `Dj` for the
/// quotient family. They agree with `A(E1) - 1`, `A(E3) - 1`, `A(E2) + 2`.
pub fn jacobian_divisor_coeffs(k: i64) -> Result<(Rational, Rational, Rational), KatoError> {
    let datum = quotient_family_datum(k)?;
    let coeff = |t: &str| datum.jacobian_curve_coefficient(t);
    let (b1, b3, b) = (coeff("C1")?, coeff("C3")?, coeff("D1")?);
    let a = |n: &str| datum.modification.curve(n).expect("base prime").log_discrepancy.clone();
    debug_assert_eq!(b1, a("E1") - int(1));
    debug_assert_eq!(b3, a("E3") - int(1));
    debug_assert_eq!(b, a("E2") + int(2));
    Ok((b1, b3, b))
}
