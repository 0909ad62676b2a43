//! Dispatches a parsed job to the library and assembles its report.

use std::sync::Arc;

use regquot::clifford::{AlgebraPresentation, CliffordElement, CliffordHandle};
use regquot::conormal::{BilinearFormData, ProductToken, QuotientRingSpec};
use regquot::derivation::{bockstein, bockstein_name, cohomology_presentation, leibniz_check, verify_theta};
use regquot::koszul::{
    check_condition_ii, check_regular_sequence, decompose_conormal, tor, FailureReason, HomogeneousIdeal,
    RegularityOutcome,
};
use regquot::linalg::ModuleSummary;
use regquot::morava::{default_window, MoravaScenario};
use regquot::pairs::{make_pair, naturality_suite, AdmissiblePair, PairMorphism};
use regquot::{BaseRing, Error, Generator, GradedRing, RingElement, RingHandle, Window};
use serde::Serialize;
use serde_json::{json, Value};

use crate::job::{Command, JobDescription, JobError, SequenceEntry, TargetBlock};

/// Window bounds given on the command line, which win over the job's.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub degree: Option<i64>,
    pub laurent: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobReport {
    pub command: String,
    /// False when the job ran but refuted the property it checks.
    pub success: bool,
    pub results: Value,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl JobReport {
    pub fn exit_code(&self) -> i32 {
        if self.success {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out.push_str(if self.success { "result: ok\n" } else { "result: refuted\n" });
        out
    }
}

fn provenance(e: &Error) -> &'static str {
    use Error::*;
    match e {
        InvalidBaseRing(_)
        | InvalidRing(_)
        | NotInBase(..)
        | MixedRings
        | WindowOverflow(_)
        | NonHomogeneous
        | OddDegree(_)
        | Parse { .. }
        | UnknownName(_) => "ring",
        EmptySequence
        | EmptyIdeal
        | NotVerifiedRegular { .. }
        | NotRegular
        | TrivialQuotient
        | ConditionIIFails { .. } => "koszul",
        DegreeMismatch(_) | InconsistentToken { .. } | NotWellDefined(_) | NotInIdeal => "conormal",
        MixedAlgebras | MixedOwners | MixedCoefficients | NotCompatible(_) | NotExterior(_) | BoundTooSmall(_) => {
            "clifford"
        }
        BadIndex(_) => "derivation",
        NotUnital(_) | NotMultiplicative(_) => "pairs",
        WindowTooSmall(_) => "morava",
    }
}

fn is_refutation(e: &Error) -> bool {
    use Error::*;
    matches!(
        e,
        NotVerifiedRegular { .. }
            | NotRegular
            | TrivialQuotient
            | ConditionIIFails { .. }
            | NotWellDefined(_)
            | NotUnital(_)
            | NotMultiplicative(_)
            | NotCompatible(_)
            | NotExterior(_)
            | NotInIdeal
    )
}

fn lift(context: &str, e: Error) -> JobError {
    let msg = if context.is_empty() {
        format!("[{}] {e}", provenance(&e))
    } else {
        format!("[{}] {context}: {e}", provenance(&e))
    };
    if is_refutation(&e) {
        JobError::Refuted(msg)
    } else {
        JobError::Semantic(msg)
    }
}

trait Context<T> {
    fn at(self, context: &str) -> Result<T, JobError>;
}

impl<T> Context<T> for regquot::Result<T> {
    fn at(self, context: &str) -> Result<T, JobError> {
        self.map_err(|e| lift(context, e))
    }
}

/// Ring, quotient and coefficient data shared by the commands.
struct Setup {
    ring: Arc<GradedRing>,
    window: Window,
    scenario: Option<MoravaScenario>,
}

fn window(job: &JobDescription, o: Overrides) -> Window {
    let base = match (&job.window, &job.scenario) {
        (Some(w), _) => Window::new(w.degree, w.laurent),
        (None, Some(s)) => default_window(s.p, s.n),
        (None, None) => Window::new(0, 0),
    };
    Window::new(o.degree.unwrap_or(base.degree), o.laurent.unwrap_or(base.laurent))
}

fn setup(job: &JobDescription, o: Overrides) -> Result<Setup, JobError> {
    let w = window(job, o);
    if let Some(s) = &job.scenario {
        let sc = regquot::morava::build_scenario(s.p, s.n, w.degree, w.laurent).at("scenario")?;
        return Ok(Setup { ring: sc.ring().clone(), window: w, scenario: Some(sc) });
    }
    let block = job.ring.as_ref().expect("validated");
    let base: BaseRing = block.base.parse().at("ring.base")?;
    let gens = block
        .generators
        .iter()
        .map(|g| if g.invertible { Generator::unit(&g.name, g.degree) } else { Generator::new(&g.name, g.degree) })
        .collect();
    let rels: Vec<&str> = block.relations.iter().map(String::as_str).collect();
    let ring = GradedRing::parse_with_relations(base, gens, &rels, w).at("ring")?;
    Ok(Setup { ring, window: w, scenario: None })
}

fn element(ring: &Arc<GradedRing>, text: &str, field: &str) -> Result<RingElement, JobError> {
    ring.parse(text).at(field)
}

fn elements(ring: &Arc<GradedRing>, entries: &[SequenceEntry], field: &str) -> Result<Vec<RingElement>, JobError> {
    entries.iter().enumerate().map(|(i, e)| element(ring, &e.element, &format!("{field}[{i}].element"))).collect()
}

fn spec(
    ring: &Arc<GradedRing>,
    entries: &[SequenceEntry],
    field: &str,
    prefix: &str,
) -> Result<Arc<QuotientRingSpec>, JobError> {
    let seq = elements(ring, entries, field)?;
    let mut tokens = Vec::new();
    let mut labels = Vec::new();
    for (i, (e, x)) in entries.iter().zip(&seq).enumerate() {
        tokens.push(match &e.obstruction {
            Some(c) => {
                let f = format!("{field}[{i}].obstruction");
                ProductToken::new(x, element(ring, c, &f)?).at(&f)?
            }
            None => ProductToken::commutative(ring),
        });
        labels.push(e.label.clone().unwrap_or_else(|| format!("{prefix}{i}")));
    }
    QuotientRingSpec::with_labels(ring, seq, tokens, labels).at(field)
}

impl Setup {
    fn source(&self, job: &JobDescription) -> Result<Arc<QuotientRingSpec>, JobError> {
        match &self.scenario {
            Some(s) => Ok(s.spec().clone()),
            None => spec(&self.ring, &job.sequence, "sequence", "a"),
        }
    }

    fn pair(
        &self,
        f: &Arc<QuotientRingSpec>,
        target: Option<&TargetBlock>,
        field: &str,
    ) -> Result<AdmissiblePair, JobError> {
        match target {
            Some(t) => {
                let k = spec(&self.ring, &t.sequence, &format!("{field}.sequence"), "c")?;
                make_pair(f, &k, t.multiplicative).at(field)
            }
            None => AdmissiblePair::identity(f).at(field),
        }
    }

    fn main_pair(&self, job: &JobDescription) -> Result<AdmissiblePair, JobError> {
        let f = self.source(job)?;
        self.pair(&f, job.target.as_ref(), "target")
    }

    fn ideals(&self, job: &JobDescription) -> Result<Vec<HomogeneousIdeal>, JobError> {
        job.ideals
            .iter()
            .enumerate()
            .map(|(i, gens)| {
                let field = format!("ideals[{i}]");
                let els = gens.iter().map(|g| element(&self.ring, g, &field)).collect::<Result<Vec<_>, _>>()?;
                HomogeneousIdeal::new(&self.ring, els).at(&field)
            })
            .collect()
    }
}

fn summary_json(m: &ModuleSummary) -> Value {
    json!(m.to_string())
}

fn presentation_json(p: &AlgebraPresentation) -> Value {
    json!({
        "kind": p.kind.as_str(),
        "coefficient_ring": p.coefficient_ring,
        "generators": p.generators.iter().map(|(n, d)| json!({"name": n, "degree": d})).collect::<Vec<_>>(),
        "relations": p.relations,
        "text": p.text,
        "rank": p.rank,
        "isomorphism_asserted": p.isomorphism_asserted,
    })
}

fn presentation_lines(p: &AlgebraPresentation) -> Vec<String> {
    let gens: Vec<String> = p.generators.iter().map(|(n, d)| format!("{n} ({d})")).collect();
    let mut lines = vec![
        p.text.clone(),
        format!("coefficients: {}", p.coefficient_ring),
        format!("generators: {}", gens.join(", ")),
    ];
    lines.extend(p.relations.iter().map(|r| format!("relation: {r}")));
    lines
}

fn form_json(b: &BilinearFormData) -> Value {
    json!({
        "degrees": b.degrees(),
        "entries": b.entries().iter().map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "diagonal": b.is_diagonal(),
        "zero": b.is_zero(),
    })
}

fn form_lines(b: &BilinearFormData) -> Vec<String> {
    b.entries().iter().map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("  ")).collect()
}

struct Out {
    success: bool,
    results: Value,
    warnings: Vec<String>,
    lines: Vec<String>,
}

impl Out {
    fn ok(results: Value, lines: Vec<String>) -> Self {
        Out { success: true, results, warnings: Vec::new(), lines }
    }
}

pub fn run_job(job: &JobDescription, overrides: Overrides) -> Result<JobReport, JobError> {
    let s = setup(job, overrides)?;
    let out = match job.command {
        Command::Presentation => {
            let h = s.main_pair(job)?.homology().at("presentation")?;
            let p = h.presentation();
            Out {
                success: true,
                results: presentation_json(&p),
                warnings: p.warnings.clone(),
                lines: presentation_lines(&p),
            }
        }
        Command::Cohomology => {
            let f = s.source(job)?;
            let p = cohomology_presentation(&f).at("cohomology")?;
            Out {
                success: true,
                results: presentation_json(&p),
                warnings: p.warnings.clone(),
                lines: presentation_lines(&p),
            }
        }
        Command::Form => {
            let pair = s.main_pair(job)?;
            let b = pair.pushed_form().at("form")?;
            Out::ok(form_json(&b), form_lines(&b))
        }
        Command::Multiply => {
            let h = s.main_pair(job)?.homology().at("multiply")?;
            let a = h.algebra();
            let mut acc = a.one();
            for (i, op) in job.operands.iter().enumerate() {
                let u = a.parse(op).at(&format!("operands[{i}]"))?;
                acc = acc.mul(&u).at("multiply")?;
            }
            let mut o = Out::ok(json!({"operands": job.operands, "product": acc.to_string()}), vec![acc.to_string()]);
            o.warnings = h.presentation().warnings;
            o
        }
        Command::Antipode => {
            let h = s.main_pair(job)?.homology().at("antipode")?;
            let u = h.algebra().parse(&job.operands[0]).at("operands[0]")?;
            let image = u.antipode();
            let involution = image.antipode() == u;
            Out {
                success: involution,
                results: json!({"operand": u.to_string(), "antipode": image.to_string(), "involution": involution}),
                warnings: Vec::new(),
                lines: vec![image.to_string()],
            }
        }
        Command::Derivations => derivations(&s, job)?,
        Command::CheckRegular => {
            let seq = elements(&s.ring, &job.sequence, "sequence")?;
            let rep = check_regular_sequence(&s.ring, &seq, s.window.degree).at("check-regular")?;
            let (failure, line) = match &rep.outcome {
                RegularityOutcome::RegularUpTo(d) => (Value::Null, format!("regular up to degree {d}")),
                RegularityOutcome::Failure { index, degree, reason } => {
                    let why = match reason {
                        FailureReason::ZeroDivisor => "zero divisor",
                        FailureReason::QuotientVanishes => "quotient vanishes",
                    };
                    (
                        json!({"index": index, "degree": degree, "reason": why}),
                        format!("not regular: element {index} fails in degree {degree} ({why})"),
                    )
                }
            };
            Out {
                success: rep.is_regular(),
                results: json!({
                    "regular": rep.is_regular(),
                    "verified_up_to": rep.verified_up_to,
                    "first_failure_index": rep.first_failure_index(),
                    "failure": failure,
                }),
                warnings: vec![format!("verified up to degree {}", rep.verified_up_to)],
                lines: vec![line],
            }
        }
        Command::Tor => {
            let j = HomogeneousIdeal::new(&s.ring, elements(&s.ring, &job.sequence, "sequence")?).at("sequence")?;
            let t = job.target.as_ref().expect("validated");
            let k = HomogeneousIdeal::new(&s.ring, elements(&s.ring, &t.sequence, "target.sequence")?).at("target")?;
            let mut table = serde_json::Map::new();
            let mut lines = Vec::new();
            for i in 0..=j.generators().len() {
                let rep = tor(&s.ring, &j, &k, i, s.window.degree).at("tor")?;
                let degs: serde_json::Map<String, Value> = rep
                    .degrees
                    .iter()
                    .filter(|(_, m)| !m.is_zero())
                    .map(|(d, m)| (d.to_string(), summary_json(m)))
                    .collect();
                for (d, m) in rep.degrees.iter().filter(|(_, m)| !m.is_zero()) {
                    lines.push(format!("Tor_{i} in internal degree {d}: {m}"));
                }
                table.insert(i.to_string(), Value::Object(degs));
            }
            let mut o = Out::ok(json!({"tor": table}), lines);
            o.warnings.push(format!("verified up to degree {}", s.window.degree));
            o
        }
        Command::ConditionIi => {
            let ideals = s.ideals(job)?;
            let checks = check_condition_ii(&ideals, s.window.degree).at("condition-ii")?;
            let all = checks.iter().all(|c| c.holds);
            let lines = checks
                .iter()
                .map(|c| match c.first_failure_degree {
                    None => format!("k = {}: holds", c.k),
                    Some(d) => format!("k = {}: fails in degree {d}", c.k),
                })
                .collect();
            Out {
                success: all,
                results: json!({
                    "holds": all,
                    "checks": checks.iter().map(|c| json!({"k": c.k, "holds": c.holds, "first_failure_degree": c.first_failure_degree})).collect::<Vec<_>>(),
                }),
                warnings: vec![format!("verified up to degree {}", s.window.degree)],
                lines,
            }
        }
        Command::Decompose => {
            let ideals = s.ideals(job)?;
            let dec = decompose_conormal(&ideals, s.window.degree).at("decompose")?;
            let degrees: Vec<Value> = dec
                .degrees
                .iter()
                .map(|d| {
                    json!({
                        "degree": d.degree,
                        "source": d.source.to_string(),
                        "summands": d.summands.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                        "isomorphism": d.is_isomorphism(),
                    })
                })
                .collect();
            let lines = dec
                .degrees
                .iter()
                .filter(|d| !d.source.is_zero())
                .map(|d| {
                    let parts: Vec<String> = d.summands.iter().map(|m| m.to_string()).collect();
                    format!("degree {}: {} ≅ {}", d.degree, d.source, parts.join(" ⊕ "))
                })
                .collect();
            Out {
                success: dec.mutually_inverse(),
                results: json!({"verified_up_to": dec.verified_up_to, "mutually_inverse": dec.mutually_inverse(), "degrees": degrees}),
                warnings: vec![format!("verified up to degree {}", dec.verified_up_to)],
                lines,
            }
        }
        Command::Naturality => {
            let source = s.main_pair(job)?;
            let m = job.morphism.as_ref().expect("validated");
            let g = spec(&s.ring, &m.sequence, "morphism.sequence", "b")?;
            let target = match &m.target {
                Some(t) => s.pair(&g, Some(t), "morphism.target")?,
                None => make_pair(&g, source.k(), false).at("morphism")?,
            };
            let morphism = PairMorphism::new(&source, &target).at("morphism")?;
            let rep = naturality_suite(&morphism).at("naturality")?;
            let mut lines: Vec<String> =
                source.f().labels().iter().zip(&rep.images).map(|(l, img)| format!("{l} ↦ {img}")).collect();
            lines.push(format!("φ square: {}", rep.phi_square));
            lines.push(format!("base change functorial: {}", rep.form_functorial));
            lines.push(format!("multiplicative: {}", rep.multiplicative));
            Out {
                success: rep.passes(),
                results: json!({
                    "images": rep.images,
                    "phi_square": rep.phi_square,
                    "form_functorial": rep.form_functorial,
                    "multiplicative": rep.multiplicative,
                    "failures": rep.failures,
                }),
                warnings: Vec::new(),
                lines,
            }
        }
        Command::Scenario => scenario(s.scenario.as_ref().expect("validated"))?,
    };
    Ok(JobReport {
        command: job.command.as_str().into(),
        success: out.success,
        results: out.results,
        warnings: out.warnings,
        lines: out.lines,
    })
}

fn derivations(s: &Setup, job: &JobDescription) -> Result<Out, JobError> {
    let h = s.main_pair(job)?.homology().at("derivations")?;
    let a = h.algebra();
    if !a.is_exterior() {
        return Err(JobError::Refuted("[derivation] the homology algebra is not exterior".into()));
    }
    let mut ops = Vec::new();
    let mut lines = Vec::new();
    let mut leibniz_all = true;
    for (i, label) in a.labels().iter().enumerate() {
        let q = bockstein(a, i).at("derivations")?.as_operator().at("derivations")?;
        let leibniz = leibniz_check(&q, None).at("derivations")?;
        leibniz_all &= leibniz;
        let name = bockstein_name(label);
        lines.push(format!("{name} ({}): Leibniz {leibniz}", q.degree()));
        ops.push(json!({"name": name, "degree": q.degree(), "leibniz": leibniz}));
    }
    let t = verify_theta(a).at("derivations")?;
    lines.push(format!(
        "squares vanish: {}, anticommute: {}, image rank: {}, square commutes: {}",
        t.squares_vanish, t.anticommute, t.image_rank, t.square_commutes
    ));
    Ok(Out {
        success: leibniz_all && t.passes(a.rank()),
        results: json!({
            "bocksteins": ops,
            "squares_vanish": t.squares_vanish,
            "anticommute": t.anticommute,
            "image_rank": t.image_rank,
            "pairing_unimodular": t.pairing_unimodular,
            "square_commutes": t.square_commutes,
        }),
        warnings: Vec::new(),
        lines,
    })
}

fn scenario(sc: &MoravaScenario) -> Result<Out, JobError> {
    let hom = sc.kn_homology().at("scenario")?;
    let coh = sc.kn_cohomology().at("scenario")?;
    let form = sc.kn_form().at("scenario")?;
    let opp = sc.opposite_forms().at("scenario")?;
    let images: Vec<String> = sc.obstruction_images().at("scenario")?.iter().map(|e| e.to_string()).collect();
    let h = sc.homology().at("scenario")?;
    let a = h.algebra();
    let last = a.generator(sc.n - 1).at("scenario")?;
    let square: CliffordElement = last.mul(&last).at("scenario")?;
    let opposite_agrees = opp.ring_form == form;
    let mut lines = vec![format!("K({})_* at p = {}", sc.n, sc.p), format!("homology: {}", hom.text)];
    lines.push(format!("cohomology: {}", coh.text));
    lines.push(format!("a{}^2 = {square}", sc.n - 1));
    lines.push(format!("obstruction images: {}", images.join(", ")));
    lines.push("form:".into());
    lines.extend(form_lines(&form).into_iter().map(|l| format!("  {l}")));
    lines.push(format!("opposite form agrees: {opposite_agrees}"));
    let mut warnings = hom.warnings.clone();
    warnings.dedup();
    Ok(Out {
        success: opposite_agrees,
        results: json!({
            "p": sc.p,
            "n": sc.n,
            "homology": presentation_json(&hom),
            "cohomology": presentation_json(&coh),
            "form": form_json(&form),
            "opposite_form_agrees": opposite_agrees,
            "mixed_form_zero": opp.mixed_form.is_zero(),
            "obstruction_images": images,
            "top_square": square.to_string(),
        }),
        warnings,
        lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::job::parse_job;

    fn run(text: &str) -> Result<JobReport, JobError> {
        run_job(&parse_job(text).unwrap(), Overrides::default())
    }

    #[test]
    fn odd_generator_degree_is_invalid_input() {
        let j = r#"{"command": "presentation", "ring": {"base": "Z", "generators": [{"name": "x", "degree": 3}]},
                    "sequence": [{"element": "x"}], "window": {"degree": 8, "laurent": 0}}"#;
        let e = run(j).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{e}");
    }

    #[test]
    fn undefined_name_is_invalid_input() {
        let j = r#"{"command": "presentation", "ring": {"base": "F_2", "generators": [{"name": "x", "degree": 2}]},
                    "sequence": [{"element": "y"}], "window": {"degree": 8, "laurent": 0}}"#;
        let e = run(j).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("sequence[0].element"), "{e}");
    }

    #[test]
    fn multiply_in_k1() {
        let r = run(r#"{"command": "multiply", "scenario": {"p": 2, "n": 1}, "operands": ["a0", "a0"]}"#).unwrap();
        assert_eq!(r.results["product"], "v1·1");
    }

    #[test]
    fn repeated_element_is_refuted() {
        let j = r#"{"command": "check-regular", "ring": {"base": "F_2", "generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 2}]},
                    "sequence": [{"element": "x"}, {"element": "x"}], "window": {"degree": 12, "laurent": 0}}"#;
        let r = run(j).unwrap();
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.results["first_failure_index"], 2);
    }

    #[test]
    fn window_override() {
        let j = parse_job(r#"{"command": "scenario", "scenario": {"p": 2, "n": 2}}"#).unwrap();
        let e = run_job(&j, Overrides { degree: Some(4), laurent: None }).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
