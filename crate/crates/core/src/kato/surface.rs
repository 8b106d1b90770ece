use std::fmt;

use super::{GlueSite, KatoDatum, KatoError, MarkedRegion};
use crate::germdyn::{ComponentAction, EigenKind, EigenReport};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SurfaceCurve {
    pub id: String,
    pub self_intersection: i64,
    pub genus: u32,
    /// Nodes of the curve itself, kept apart from intersections with others.
    pub nodes: u32,
}

/// Compact curves of a surface with their intersection multigraph.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CurveConfig {
    pub curves: Vec<SurfaceCurve>,
    /// Unordered index pairs `(i, j)` with `i < j`, one per intersection point.
    pub intersections: Vec<(usize, usize)>,
}

impl CurveConfig {
    /// Rational curves `(id, self, nodes)` and intersections by id.
    pub fn rational(curves: &[(&str, i64, u32)], intersections: &[(&str, &str)]) -> Self {
        let curves: Vec<SurfaceCurve> = curves
            .iter()
            .map(|&(id, s, n)| SurfaceCurve { id: id.into(), self_intersection: s, genus: 0, nodes: n })
            .collect();
        let mut config = CurveConfig { curves, intersections: Vec::new() };
        for (a, b) in intersections {
            let (i, j) = (config.index_of(a).expect("known curve"), config.index_of(b).expect("known curve"));
            config.add_intersection(i, j);
        }
        config
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.id == id)
    }

    pub fn curve(&self, id: &str) -> Option<&SurfaceCurve> {
        self.curves.iter().find(|c| c.id == id)
    }

    fn add_intersection(&mut self, i: usize, j: usize) {
        self.intersections.push((i.min(j), i.max(j)));
    }

    pub fn intersection_count(&self, a: &str, b: &str) -> usize {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.intersections.iter().filter(|&&e| e == (i.min(j), i.max(j))).count(),
            _ => 0,
        }
    }

    /// Intersection points on curve `i`, nodes counted twice.
    fn valence(&self, i: usize) -> usize {
        self.intersections.iter().filter(|&&(a, b)| a == i || b == i).count() + 2 * self.curves[i].nodes as usize
    }

    /// Connected components as sorted index lists.
    fn components(&self) -> Vec<Vec<usize>> {
        let n = self.curves.len();
        let mut label: Vec<usize> = (0..n).collect();
        let root = |label: &Vec<usize>, mut i: usize| {
            while label[i] != i {
                i = label[i];
            }
            i
        };
        for &(a, b) in &self.intersections {
            let (ra, rb) = (root(&label, a), root(&label, b));
            label[ra.max(rb)] = ra.min(rb);
        }
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut roots: Vec<usize> = Vec::new();
        for i in 0..n {
            let r = root(&label, i);
            match roots.iter().position(|&x| x == r) {
                Some(k) => comps[k].push(i),
                None => {
                    roots.push(r);
                    comps.push(vec![i]);
                }
            }
        }
        comps
    }
}

impl fmt::Display for CurveConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.curves {
            write!(f, "curve {} self={} genus={}", c.id, c.self_intersection, c.genus)?;
            if c.nodes > 0 {
                write!(f, " nodes={}", c.nodes)?;
            }
            writeln!(f)?;
        }
        for &(i, j) in &self.intersections {
            writeln!(f, "meet {} {}", self.curves[i].id, self.curves[j].id)?;
        }
        Ok(())
    }
}

impl KatoDatum {
    /// Compact curves of the Kato surface: one per prime of `Y'` outside the
    /// marked region. A contracted curve glued back onto its own owner closes
    /// it into a nodal curve (self-intersection `+2`); glued onto another
    /// prime it adds an intersection point.
    pub fn surface_curves(&self) -> Result<CurveConfig, KatoError> {
        let outside = self.outside_primes();
        let seq = &self.modification;
        if let MarkedRegion::Chain(chain) = &self.marked {
            let missing: Vec<String> = outside
                .iter()
                .filter(|e| seq.neighbors(e).iter().any(|n| chain.contains(n)))
                .filter(|e| !self.gluing.iter().any(|g| &g.owner == *e))
                .cloned()
                .collect();
            if !missing.is_empty() {
                return Err(KatoError::PartialGluing(missing));
            }
        }
        for g in &self.gluing {
            if !outside.contains(&g.target) {
                return Err(KatoError::BadGluing(format!("target `{}` of {} is not a surviving prime", g.target, g.tag)));
            }
            if g.site == GlueSite::Node {
                return Err(KatoError::BadGluing(format!("{} meets its target at a node; only free sites are supported", g.tag)));
            }
        }
        let mut config = CurveConfig::default();
        for e in &outside {
            let c = seq.curve(e).expect("outside prime");
            let owned: Vec<_> = self.gluing.iter().filter(|g| &g.owner == e).collect();
            let loops = owned.iter().filter(|g| &g.target == e).count() as u32;
            let id = match &owned[..] {
                [g] => g.tag.clone(),
                _ => e.clone(),
            };
            config.curves.push(SurfaceCurve {
                id,
                self_intersection: c.self_intersection + 2 * i64::from(loops),
                genus: c.genus,
                nodes: loops,
            });
        }
        for (i, e) in outside.iter().enumerate() {
            for (j, f) in outside.iter().enumerate().skip(i + 1) {
                for _ in 0..seq.meeting_count(e, f) {
                    config.add_intersection(i, j);
                }
            }
        }
        for g in &self.gluing {
            if g.owner != g.target {
                let pos = |n: &String| outside.iter().position(|x| x == n).expect("checked above");
                config.add_intersection(pos(&g.owner), pos(&g.target));
            }
        }
        Ok(config)
    }
}

/// Contract smooth rational `(-1)`-curves until none is left, never removing
/// the last curve.
pub fn minimal_model(config: &CurveConfig) -> CurveConfig {
    let mut cur = config.clone();
    while cur.curves.len() > 1 {
        let Some(k) = cur.curves.iter().position(|c| c.genus == 0 && c.nodes == 0 && c.self_intersection == -1) else {
            break;
        };
        // multiplicity of each neighbour through the contracted curve
        let mut mult = vec![0u32; cur.curves.len()];
        for &(a, b) in &cur.intersections {
            if a == k {
                mult[b] += 1;
            } else if b == k {
                mult[a] += 1;
            }
        }
        let mut next = CurveConfig::default();
        let renum = |i: usize| if i > k { i - 1 } else { i };
        for (i, c) in cur.curves.iter().enumerate() {
            if i == k {
                continue;
            }
            let m = mult[i];
            let mut c = c.clone();
            c.self_intersection += i64::from(m * m);
            c.nodes += m * m.saturating_sub(1) / 2;
            next.curves.push(c);
        }
        for &(a, b) in &cur.intersections {
            if a != k && b != k {
                next.add_intersection(renum(a), renum(b));
            }
        }
        for i in 0..cur.curves.len() {
            for j in i + 1..cur.curves.len() {
                if i != k && j != k {
                    for _ in 0..mult[i] * mult[j] {
                        next.add_intersection(renum(i), renum(j));
                    }
                }
            }
        }
        cur = next;
    }
    cur
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceClass {
    Enoki,
    HalfInoue,
    HyperbolicInoue,
    Intermediate,
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurfaceClass::Enoki => "Enoki",
            SurfaceClass::HalfInoue => "half Inoue-Hirzebruch",
            SurfaceClass::HyperbolicInoue => "hyperbolic Inoue-Hirzebruch",
            SurfaceClass::Intermediate => "intermediate",
        })
    }
}

impl SurfaceClass {
    /// Type of the eigenvaluation of any germ producing this class.
    pub fn eigen_kind(self) -> EigenKind {
        match self {
            SurfaceClass::Enoki => EigenKind::Curve,
            SurfaceClass::HalfInoue | SurfaceClass::HyperbolicInoue => EigenKind::Irrational,
            SurfaceClass::Intermediate => EigenKind::InfinitelySingular,
        }
    }
}

/// Class of a Kato surface read off the eigenvaluation of its germ.
pub fn classify_surface(report: &EigenReport) -> Result<SurfaceClass, KatoError> {
    match (report.kind, report.component_action) {
        (EigenKind::Curve, _) => Ok(SurfaceClass::Enoki),
        (EigenKind::Irrational, Some(ComponentAction::Switches)) => Ok(SurfaceClass::HalfInoue),
        (EigenKind::Irrational, _) => Ok(SurfaceClass::HyperbolicInoue),
        (EigenKind::InfinitelySingular, _) => Ok(SurfaceClass::Intermediate),
        (EigenKind::Divisorial, _) => Err(KatoError::DivisorialEigenvaluation),
    }
}

/// Class of a Kato surface read off its curves, after blowing down to the
/// minimal model: one cycle with `D² = 0` is Enoki, one or two cycles with
/// `D² < 0` and nothing else are Inoue-Hirzebruch, one cycle carrying trees
/// is intermediate. `None` when the configuration fits none of these.
pub fn classify_configuration(config: &CurveConfig) -> Option<SurfaceClass> {
    let min = minimal_model(config);
    let comps = min.components();
    let mut cycles = Vec::new();
    let mut with_trees = false;
    for comp in &comps {
        let edges = min.intersections.iter().filter(|&&(a, _)| comp.contains(&a)).count();
        let nodes: usize = comp.iter().map(|&i| min.curves[i].nodes as usize).sum();
        // cyclomatic number edges - vertices + 1 + nodes must be one
        if edges + nodes != comp.len() {
            return None;
        }
        if comp.iter().any(|&i| min.valence(i) != 2) {
            with_trees = true;
        }
        let square: i64 = comp.iter().map(|&i| min.curves[i].self_intersection).sum::<i64>() + 2 * edges as i64;
        cycles.push(square);
    }
    match (&cycles[..], with_trees) {
        ([_], true) => Some(SurfaceClass::Intermediate),
        ([0], false) => Some(SurfaceClass::Enoki),
        ([d], false) if *d < 0 => Some(SurfaceClass::HalfInoue),
        ([d, e], false) if *d < 0 && *e < 0 => Some(SurfaceClass::HyperbolicInoue),
        _ => None,
    }
}
