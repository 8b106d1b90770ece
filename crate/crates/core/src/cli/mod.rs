//! Report builders behind the `katoval` binary. Every command takes its
//! input as text and returns a deterministic [`Report`].

use std::fmt;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::blowup::{BlowupError, BlowupSequence};
use crate::dualgraph::{quotient_chain, DualGraph, GraphError};
use crate::germdyn::{GermError, GermNormalForm};
use crate::kato::{
    classify_configuration, classify_surface, compose, jacobian_divisor_coeffs, minimal_model, quotient_family_datum, KatoDatum,
    KatoError,
};
use crate::numerics::{hj_expand, NumericsError, QuadNumber, Rational};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error(transparent)]
    Kato(#[from] KatoError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

impl CliError {
    /// Short machine-greppable tag, printed as `error[tag]`.
    pub fn tag(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Graph(_) => "graph",
            CliError::Blowup(_) => "blowup",
            CliError::Germ(_) => "germ",
            CliError::Kato(_) => "kato",
            CliError::Numerics(_) => "numerics",
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    /// Add decimal approximations next to exact irrational values.
    pub approx: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Section {
    heading: String,
    lines: Vec<String>,
}

/// Plain-text report made of titled sections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    title: String,
    sections: Vec<Section>,
    /// DOT rendering of the relevant dual graph, if any.
    pub dot: Option<String>,
}

impl Report {
    fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), sections: Vec::new(), dot: None }
    }

    fn section(&mut self, heading: &str, lines: Vec<String>) {
        self.sections.push(Section { heading: heading.to_string(), lines });
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.title)?;
        for s in &self.sections {
            writeln!(f)?;
            writeln!(f, "[{}]", s.heading)?;
            for l in &s.lines {
                writeln!(f, "  {l}")?;
            }
        }
        Ok(())
    }
}

fn list<T: fmt::Display>(items: &[T]) -> String {
    format!("({})", items.iter().map(T::to_string).collect::<Vec<_>>().join(", "))
}

fn quad(x: &QuadNumber, opts: Options) -> String {
    if opts.approx && !x.is_rational() {
        format!("{x}  (approx. {:.6})", x.to_f64())
    } else {
        x.to_string()
    }
}

fn rational_approx(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn graph_sections(report: &mut Report, g: &DualGraph, opts: Options) {
    let m = g.intersection_matrix();
    report.section(
        "vertices",
        g.vertices().iter().map(|v| format!("{} genus={} self={}", v.id, v.genus, v.self_intersection)).collect(),
    );
    report.section("intersection matrix", m.rows().iter().map(|r| list(r)).collect());
    let definite = g.is_negative_definite();
    report.section(
        "determinant",
        vec![format!("det M = {}", g.determinant()), format!("negative definite: {}", if definite { "yes" } else { "no" })],
    );
    match g.inverse_matrix() {
        Ok(inv) => {
            let rows = (0..inv.size()).map(|i| list(&(0..inv.size()).map(|j| inv.get(i, j).clone()).collect::<Vec<_>>()));
            report.section("inverse matrix", rows.collect());
        }
        Err(e) => report.section("inverse matrix", vec![format!("n/a: {e}")]),
    }
    let a_lines = match g.log_discrepancies() {
        Ok(a) => {
            let mut v = vec![format!("A = {}", list(&a.coefficients()))];
            v.extend(a.entries().iter().map(|(id, x)| {
                if opts.approx {
                    format!("A({id}) = {x}  (approx. {:.6})", rational_approx(x))
                } else {
                    format!("A({id}) = {x}")
                }
            }));
            v
        }
        Err(e) => vec![format!("n/a: {e}")],
    };
    report.section("log-discrepancies", a_lines);
    let z = match g.fundamental_cycle() {
        Ok(z) => vec![format!("Z = {}", list(&z.coefficients()))],
        Err(e) => vec![format!("n/a: {e}")],
    };
    report.section("fundamental cycle", z);
    report.dot = Some(g.to_dot());
}

/// `graph <file>`: invariants of a dual graph.
pub fn cmd_graph(text: &str, opts: Options) -> Result<Report, CliError> {
    let g = DualGraph::parse(text)?;
    let mut r = Report::new("dual graph");
    graph_sections(&mut r, &g, opts);
    Ok(r)
}

/// `quotient p q`: the resolution chain of `1/p (1, q)` and its invariants.
pub fn cmd_quotient(p: u64, q: u64, opts: Options) -> Result<Report, CliError> {
    let chain = hj_expand(p, q)?;
    let g = quotient_chain(p, q)?;
    let mut r = Report::new(format!("cyclic quotient 1/{p} (1, {q})"));
    r.section("chain", vec![format!("p/q = {p}/{q} = {}", list(&chain)), format!("self-intersections {}", list(&chain.iter().map(|&a| -(a as i64)).collect::<Vec<_>>()))]);
    graph_sections(&mut r, &g, opts);
    Ok(r)
}

/// `blowup <script>`: blow-ups of the smooth germ.
pub fn cmd_blowup(script: &str, _opts: Options) -> Result<Report, CliError> {
    let seq = BlowupSequence::smooth().run_script(script)?;
    let mut r = Report::new("blow-up sequence over the smooth germ");
    let steps = seq
        .steps()
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let c = seq.curve(&rec.created).expect("created prime");
            format!("{:>2}. {:<16} -> {}  b={} A={}", i + 1, rec.step.to_string(), rec.created, c.b, c.log_discrepancy)
        })
        .collect();
    r.section("steps", steps);
    r.section(
        "primes",
        seq.exceptional()
            .map(|c| {
                let w = c.weight.map(|w| format!(" weight=({}, {})", w[0], w[1])).unwrap_or_default();
                format!("{} b={} A={} self={}{w}", c.name, c.b, c.log_discrepancy, c.self_intersection)
            })
            .collect(),
    );
    let sk = seq.skeleton();
    let mut lines: Vec<String> = sk.vertices.iter().map(|(n, b)| format!("vertex nu_{n} (b = {b})")).collect();
    lines.extend(sk.segments.iter().map(|s| format!("segment {}-{}: {}·r + {}·s = 1", s.e, s.f, s.b_e, s.b_f)));
    r.section("skeleton", lines);
    let g = seq.to_dual_graph();
    if !g.is_empty() {
        let check = g.log_discrepancies()?;
        let agree = check.coefficients() == seq.log_discrepancies();
        r.section("check", vec![format!("A from M^-1(2g-2+s) agrees with the bookkeeping: {}", if agree { "yes" } else { "NO" })]);
    }
    r.dot = Some(g.to_dot());
    Ok(r)
}

/// `germ <spec>`: validation, degree, eigenvaluation and surface class.
pub fn cmd_germ(spec: &str, opts: Options) -> Result<Report, CliError> {
    let germ: GermNormalForm = spec.parse()?;
    let notes = germ.validate()?;
    let mut r = Report::new(format!("germ {germ}"));
    let mut v = vec!["valid normal form".to_string()];
    v.extend(notes);
    r.section("validation", v);
    r.section("topological degree", vec![format!("topdeg = {}", germ.topdeg())]);
    let e = germ.eigenvaluation()?;
    let mut lines = vec![format!("type: {}", e.kind)];
    if let Some(l) = &e.eigenvalue {
        lines.push(format!("eigenvalue lambda = {}", quad(l, opts)));
    }
    if let Some(w) = &e.normalized_weights {
        lines.push(format!("eigen-weights (r, s) = ({}, {})", quad(&w.r, opts), quad(&w.s, opts)));
    }
    let slope = match (&e.shadow_slope, opts.approx) {
        (crate::germdyn::Slope::Finite(t), true) => quad(t, opts),
        (s, _) => s.to_string(),
    };
    lines.push(format!("shadow slope s/r = {slope}"));
    if let Some(a) = e.component_action {
        lines.push(format!("component action: {a}"));
    }
    lines.extend(e.warnings.iter().map(|w| format!("warning: {w}")));
    r.section("eigenvaluation", lines);
    r.section(
        "contracted curves",
        germ.contracted_curves().iter().map(|(c, w)| format!("{{{c}}} -> divisorial image with weights {w}")).collect(),
    );
    if let Some((i, j)) = germ.jacobian_exponent() {
        r.section("jacobian", vec![format!("J = unit · z^{i} w^{j}")]);
    }
    let class = classify_surface(&e)?;
    let mut cl = vec![format!("Kato surface: {class}")];
    if class == crate::kato::SurfaceClass::Enoki {
        cl.push("parabolic vs special Enoki is not decided combinatorially".into());
    }
    r.section("classification", cl);
    if let GermNormalForm::Class6 { matrix } = germ {
        let d = crate::kato::datum_from_class6(matrix)?;
        r.section("kato datum", datum_lines(&d));
    }
    Ok(r)
}

/// A datum source: a datum file's text or the quotient family.
#[derive(Clone, Copy)]
pub enum DatumSource<'a> {
    Text(&'a str),
    Family(i64),
}

impl DatumSource<'_> {
    fn load(&self) -> Result<KatoDatum, CliError> {
        Ok(match self {
            DatumSource::Text(t) => KatoDatum::parse(t)?,
            DatumSource::Family(k) => quotient_family_datum(*k)?,
        })
    }
}

fn datum_lines(d: &KatoDatum) -> Vec<String> {
    let mut v = vec![
        format!("base: {}", d.base()),
        format!("blow-ups: {}", d.step_count()),
    ];
    v.extend(d.modification().steps().iter().map(|s| format!("  {} -> {}", s.step, s.created)));
    v.push(format!("marked region: {} (index {})", d.marked(), d.marked_index()));
    for c in d.contracted() {
        v.push(format!("contracted chain {} -> 1/{} (1, {}), lattice index {}", c.primes.join(" - "), c.p, c.q, c.lattice_index));
    }
    for g in d.gluing() {
        v.push(format!("glue {}: {} -> {}", g.tag, g.owner, g.target));
    }
    v
}

/// `kato <file> | kato family k`.
pub fn cmd_kato(src: DatumSource, opts: Options) -> Result<Report, CliError> {
    let d = src.load()?;
    let title = match src {
        DatumSource::Family(k) => format!("Kato datum: quotient family k = {k}"),
        DatumSource::Text(_) => "Kato datum".to_string(),
    };
    let mut r = Report::new(title);
    r.section("datum", datum_lines(&d));
    r.section(
        "log-discrepancies in Y'",
        d.modification()
            .exceptional()
            .map(|c| {
                if opts.approx {
                    format!("A({}) = {}  (approx. {:.6})", c.name, c.log_discrepancy, rational_approx(&c.log_discrepancy))
                } else {
                    format!("A({}) = {}", c.name, c.log_discrepancy)
                }
            })
            .collect(),
    );
    if !d.correspondence().is_empty() {
        let mut lines = Vec::new();
        for (b, m) in d.correspondence() {
            lines.push(format!("{b} -> {m}: A({m}) - A({b}) = {}", d.jacobian_gap(b)?));
        }
        r.section("jacobian gaps", lines);
        let coeffs: Vec<String> = d
            .gluing()
            .iter()
            .map(|g| match d.jacobian_curve_coefficient(&g.tag) {
                Ok(x) => format!("ord_{}(J) = {x}", g.tag),
                Err(e) => format!("ord_{}(J) = n/a: {e}", g.tag),
            })
            .collect();
        let mut coeffs = coeffs;
        if let DatumSource::Family(k) = src {
            let (b1, b3, b) = jacobian_divisor_coeffs(k)?;
            let a = |n: &str| d.modification().curve(n).expect("base prime").log_discrepancy.clone();
            let one = Rational::from_integer(1.into());
            let agree = b1 == a("E1") - &one && b3 == a("E3") - &one && b == a("E2") + &one + &one;
            coeffs.push(format!("J = ({b1})·C1 + ({b3})·C3 + ({b})·(D1 + ... + D{})", k - 1));
            coeffs.push(format!("equals (A(E1) - 1, A(E3) - 1, A(E2) + 2): {}", if agree { "yes" } else { "NO" }));
        }
        if !coeffs.is_empty() {
            r.section("jacobian divisor", coeffs);
        }
    }
    let c = d.surface_curves()?;
    r.section("surface curves", c.to_string().lines().map(String::from).collect());
    let m = minimal_model(&c);
    r.section("minimal model", m.to_string().lines().map(String::from).collect());
    let class = match classify_configuration(&c) {
        Some(cl) => {
            let mut s = format!("Kato surface: {cl} (eigenvaluation type: {})", cl.eigen_kind());
            if cl == crate::kato::SurfaceClass::Enoki {
                s.push_str("; parabolic vs special is not decided combinatorially");
            }
            s
        }
        None => "unclassified: the curves do not form a Kato configuration".to_string(),
    };
    r.section("classification", vec![class]);
    r.dot = Some(d.modification().to_dual_graph().to_dot());
    Ok(r)
}

/// `compose a b`: the datum of the composite germ.
pub fn cmd_compose(first: DatumSource, second: DatumSource, _opts: Options) -> Result<Report, CliError> {
    let (d1, d2) = (first.load()?, second.load()?);
    let d = compose(&d1, &d2)?;
    let mut r = Report::new("composed Kato datum");
    r.section(
        "factors",
        vec![format!("first: {} blow-ups", d1.step_count()), format!("second: {} blow-ups", d2.step_count())],
    );
    r.section("datum", datum_lines(&d));
    r.section("datum file", d.to_text().lines().map(String::from).collect());
    r.dot = Some(d.modification().to_dual_graph().to_dot());
    Ok(r)
}
