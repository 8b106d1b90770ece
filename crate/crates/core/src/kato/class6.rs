use super::{chain_type, ContractedChain, KatoBase, KatoDatum, KatoError, MarkedRegion};
use crate::blowup::BlowupSequence;
use crate::germdyn::GermNormalForm;

/// Factor a Class 6 germ as a toric modification followed by a local
/// isomorphism. The kept primes are the divisorial images of the contracted
/// axes, `A·(1,0) = (a,c)` and `A·(0,1) = (b,d)`; every other toric prime
/// built on the way is contracted to a cyclic quotient point.
pub fn datum_from_class6(matrix: [[i64; 2]; 2]) -> Result<KatoDatum, KatoError> {
    let [[a, b], [c, d]] = matrix;
    GermNormalForm::class6(a, b, c, d).validate()?;
    let mut seq = BlowupSequence::smooth();
    let mut kept = Vec::new();
    for (r, s) in [(a, c), (b, d)] {
        if r > 0 && s > 0 {
            kept.push(seq.ensure_toric_ray(r as u64, s as u64)?);
        }
    }
    let contracted = contracted_runs(&seq, &kept)?;
    let marked = match &kept[..] {
        [p] => MarkedRegion::FreePoint(p.clone()),
        [p, q] => MarkedRegion::Point(p.clone(), q.clone()),
        _ => return Err(KatoError::BadMark("no contracted curve".into())),
    };
    Ok(KatoDatum::new(KatoBase::Smooth, seq, marked, Vec::new())?.with_contracted(contracted))
}

/// Maximal runs of toric exceptional primes not in `kept`, in slope order.
fn contracted_runs(seq: &BlowupSequence, kept: &[String]) -> Result<Vec<ContractedChain>, KatoError> {
    let toric = seq.toric_curves();
    let inner = |i: usize| {
        let name = &toric[i].0;
        seq.curve(name).is_some_and(|c| c.is_exceptional()) && !kept.contains(name)
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < toric.len() {
        if !inner(i) {
            i += 1;
            continue;
        }
        let start = i;
        while i < toric.len() && inner(i) {
            i += 1;
        }
        // axes bound every run, so both neighbours exist
        let (u, v) = (toric[start - 1].1, toric[i].1);
        let index = (u[0] as i128 * v[1] as i128 - u[1] as i128 * v[0] as i128).unsigned_abs() as u64;
        let primes: Vec<String> = toric[start..i].iter().map(|(n, _)| n.clone()).collect();
        let selfs: Vec<i64> = primes.iter().map(|n| seq.curve(n).expect("toric prime").self_intersection).collect();
        let (p, q) = chain_type(&selfs)?;
        if p != index {
            return Err(KatoError::BadMark(format!("chain {primes:?} has order {p} but lattice index {index}")));
        }
        out.push(ContractedChain { primes, p, q, lattice_index: index });
    }
    Ok(out)
}
