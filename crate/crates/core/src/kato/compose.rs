use std::collections::BTreeMap;

use super::{Glue, KatoDatum, KatoError, MarkedRegion};
use crate::blowup::{Step, AXIS_W, AXIS_Z};

/// Graft `d2`'s modification at `d1`'s marked region, giving the datum of
/// `f1 ∘ f2`.
///
/// Over a smooth base, the axes of `d2` land on the primes through the marked
/// point: at `E ∩ F` the `z`-axis goes to `E` and the `w`-axis to `F`; at a
/// free point of `E` the `z`-axis goes to `E` and the `w`-axis to a curve that
/// is not exceptional. Over a quotient base the base primes of `d2` go to the
/// marked chain of `d1`. Colliding names get primes appended.
///
/// The gluing of the composite is only known when one factor is trivial;
/// otherwise it is left empty.
pub fn compose(d1: &KatoDatum, d2: &KatoDatum) -> Result<KatoDatum, KatoError> {
    if d1.base != d2.base {
        return Err(KatoError::BaseMismatch(d1.base.to_string(), d2.base.to_string()));
    }
    // d2 name -> composite name; `None` is a non-exceptional transverse curve
    let mut map: BTreeMap<String, Option<String>> = BTreeMap::new();
    match &d1.marked {
        MarkedRegion::Origin => {
            map.insert(AXIS_Z.into(), Some(AXIS_Z.into()));
            map.insert(AXIS_W.into(), Some(AXIS_W.into()));
        }
        MarkedRegion::FreePoint(e) => {
            map.insert(AXIS_Z.into(), Some(e.clone()));
            map.insert(AXIS_W.into(), None);
        }
        MarkedRegion::Point(e, f) => {
            map.insert(AXIS_Z.into(), Some(e.clone()));
            map.insert(AXIS_W.into(), Some(f.clone()));
        }
        MarkedRegion::Chain(_) => {
            for (b, m) in &d1.correspondence {
                map.insert(b.clone(), Some(m.clone()));
            }
        }
    }
    let mut seq = d1.modification.clone();
    let lookup = |map: &BTreeMap<String, Option<String>>, n: &str| -> Result<Option<String>, KatoError> {
        map.get(n).cloned().ok_or_else(|| KatoError::BadMark(format!("`{n}` has no image under the marked region")))
    };
    for rec in d2.modification.steps() {
        let step = match &rec.step {
            Step::Initial => match &d1.marked {
                MarkedRegion::Origin => Step::Initial,
                MarkedRegion::FreePoint(e) => Step::Free(e.clone()),
                MarkedRegion::Point(e, f) => Step::Satellite(e.clone(), f.clone()),
                MarkedRegion::Chain(_) => return Err(KatoError::BadMark("initial blow-up over a quotient base".into())),
            },
            Step::Free(x) => Step::Free(lookup(&map, x)?.expect("free steps sit on exceptional primes")),
            Step::Satellite(x, y) => match (lookup(&map, x)?, lookup(&map, y)?) {
                (Some(x), Some(y)) => Step::Satellite(x, y),
                (Some(x), None) | (None, Some(x)) => Step::Free(x),
                (None, None) => unreachable!("one of two meeting curves is exceptional"),
            },
        };
        let mut name = rec.created.clone();
        while seq.curve(&name).is_some() {
            name.push('\'');
        }
        seq.push_step(step, Some(&name))?;
        map.insert(rec.created.clone(), Some(name));
    }
    let image = |n: &String| -> String { map.get(n).cloned().flatten().unwrap_or_else(|| n.clone()) };
    let marked = match &d2.marked {
        MarkedRegion::Origin => d1.marked.clone(),
        MarkedRegion::FreePoint(e) => MarkedRegion::FreePoint(image(e)),
        MarkedRegion::Point(e, f) => MarkedRegion::Point(image(e), image(f)),
        MarkedRegion::Chain(c) => MarkedRegion::Chain(c.iter().map(image).collect()),
    };
    let gluing: Vec<Glue> = if d1.step_count() == 0 {
        d2.gluing
            .iter()
            .map(|g| Glue { tag: g.tag.clone(), owner: image(&g.owner), target: image(&g.target), site: g.site })
            .collect()
    } else if d2.step_count() == 0 {
        d1.gluing.clone()
    } else {
        Vec::new()
    };
    let mut contracted = d1.contracted.clone();
    contracted.extend(d2.contracted.iter().map(|c| {
        let mut c = c.clone();
        c.primes = c.primes.iter().map(image).collect();
        c
    }));
    Ok(KatoDatum::new(d1.base, seq, marked, gluing)?.with_contracted(contracted))
}

impl KatoDatum {
    /// Name-independent form of every curve: base curves keep their names,
    /// created primes are described by the step that made them.
    fn canonical_forms(&self) -> BTreeMap<String, String> {
        let mut canon: BTreeMap<String, String> =
            self.modification.curves().iter().map(|c| (c.name.clone(), c.name.clone())).collect();
        for rec in self.modification.steps() {
            let form = match &rec.step {
                Step::Initial => "init".to_string(),
                Step::Free(x) => format!("free({})", canon[x]),
                Step::Satellite(x, y) => {
                    let mut pair = [canon[x].clone(), canon[y].clone()];
                    pair.sort();
                    format!("sat({}, {})", pair[0], pair[1])
                }
            };
            canon.insert(rec.created.clone(), form);
        }
        canon
    }

    /// Name-independent description of the blow-up tree: one entry per
    /// created prime, sorted. Two data with equal trees differ only by names.
    pub fn step_tree(&self) -> Vec<String> {
        let canon = self.canonical_forms();
        let mut out: Vec<String> = self.modification.steps().iter().map(|r| canon[&r.created].clone()).collect();
        out.sort();
        out
    }

    /// The marked region in terms of [`KatoDatum::step_tree`] entries.
    pub fn canonical_mark(&self) -> Vec<String> {
        let canon = self.canonical_forms();
        match &self.marked {
            MarkedRegion::Origin => vec!["origin".into()],
            MarkedRegion::FreePoint(e) => vec![canon[e].clone()],
            MarkedRegion::Point(e, f) => {
                let mut v = vec![canon[e].clone(), canon[f].clone()];
                v.sort();
                v
            }
            MarkedRegion::Chain(c) => c.iter().map(|e| canon[e].clone()).collect(),
        }
    }
}
