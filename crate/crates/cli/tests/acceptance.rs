//! Acceptance criteria AC1 to AC9. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails. All comparisons are exact.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regquot::clifford::tor_exterior_comparison;
use regquot::clifford::{
    induced_algebra_map, verify_kunneth, Blade, CliffordAlgebra, CliffordHandle, HomologyAlgebra, TensorElement,
};
use regquot::conormal::{BilinearFormData, ProductToken, QuotientRingSpec};
use regquot::derivation::{bockstein, leibniz_check, verify_theta};
use regquot::koszul::{
    check_regular_sequence, decompose_conormal, tor1_equals_intersection_over_product, HomogeneousIdeal,
};
use regquot::morava::{v_degree, MoravaScenario};
use regquot::oracle::brute_force_presentation;
use regquot::pairs::{make_pair, naturality_suite, PairMorphism};
use regquot::{BaseRing, Generator, GradedRing, QuotientRing, RingElement, RingHandle, Window};

type Outcome = regquot::Result<(bool, String)>;
type Criterion<'a> = (&'static str, &'static str, Box<dyn Fn() -> Outcome + 'a>);

fn secs(d: Duration) -> String {
    format!("{:.3} s", d.as_secs_f64())
}

fn ac1() -> Outcome {
    let mut ok = true;
    let mut slowest = Duration::ZERO;
    for (p, n) in [(3u64, 1usize), (3, 2), (5, 2)] {
        let start = Instant::now();
        let s = MoravaScenario::with_default_window(p, n)?;
        let pres = s.kn_homology()?;
        let form = s.kn_form()?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        let labels: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
        let degrees: Vec<(String, i64)> = (0..n).map(|i| (format!("a{i}"), v_degree(p, i) + 1)).collect();
        ok &= pres.text == format!("Λ({})", labels.join(", "))
            && form.is_zero()
            && pres.generators == degrees
            && elapsed < Duration::from_secs(5);
    }
    Ok((ok, format!("Λ(a0, …, a_(n-1)) with q = 0 for (3,1), (3,2), (5,2); slowest {} (limit 5 s)", secs(slowest))))
}

fn ac2() -> Outcome {
    let mut ok = true;
    let mut slowest = Duration::ZERO;
    for n in 1..=3usize {
        let start = Instant::now();
        let s = MoravaScenario::with_default_window(2, n)?;
        let h = s.homology()?;
        let text = h.presentation().text;
        let top = h.algebra().generator(n - 1)?;
        let square = top.mul(&top)?;
        let vn = h.algebra().scalar(&s.ring().gen(&format!("v{n}"))?)?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        let ext = if n == 1 {
            String::new()
        } else {
            format!("Λ({}) ⊗ ", (0..n - 1).map(|i| format!("a{i}")).collect::<Vec<_>>().join(", "))
        };
        let expected = format!("{ext}T(a{m})/(a{m}^2 − v{n})", m = n - 1);
        ok &= text == expected && square == vn && elapsed < Duration::from_secs(10);
    }
    Ok((ok, format!("a_(n-1)^2 = v_n·1 for n = 1, 2, 3; slowest {} (limit 10 s)", secs(slowest))))
}

fn ac3() -> Outcome {
    let mut ok = true;
    for n in 1..=3usize {
        let s = MoravaScenario::with_default_window(2, n)?;
        let b = s.kn_form()?;
        let vn = s.kn().reduce(&s.ring().gen(&format!("v{n}"))?)?;
        for i in 0..n {
            for j in 0..n {
                let expected = if i == n - 1 && j == n - 1 { vn.clone() } else { s.kn().zero() };
                ok &= *b.entry(i, j) == expected;
            }
        }
        let opp = s.opposite_forms()?;
        ok &= opp.ring_form == b && opp.mixed_form.is_zero();
        ok &= 2 * (v_degree(2, n - 1) + 1) == v_degree(2, n);
    }
    Ok((ok, "b = v_n at (n-1, n-1), zero elsewhere, equal to the opposite form, n = 1, 2, 3".into()))
}

fn ac4() -> Outcome {
    let r = GradedRing::new(BaseRing::Integers, vec![], Window::new(0, 0))?;
    let quotient = |n: i64, label: &str| {
        QuotientRingSpec::with_labels(&r, vec![r.int(n)], vec![ProductToken::commutative(&r)], vec![label.into()])
    };
    let mut ok = true;
    for p in [2i64, 3, 5] {
        let f = quotient(p.pow(4), "a")?;
        let g = quotient(p.pow(3), "b")?;
        let over_g = induced_algebra_map(
            &HomologyAlgebra::new(&f, make_pair(&f, &g, false)?.pi())?,
            &HomologyAlgebra::of_ring(&g)?,
        )?;
        ok &= over_g.images()[0].to_string() == format!("{p}·b");
        for (e, nonzero) in [(1u32, false), (2, true)] {
            let k = quotient(p.pow(e), "c")?;
            let m = PairMorphism::new(&make_pair(&f, &k, false)?, &make_pair(&g, &k, false)?)?;
            let rep = naturality_suite(&m)?;
            let map = m.induced_map()?;
            ok &= rep.passes() && map.vanishes_in_positive_degrees()? != nonzero;
        }
    }
    Ok((ok, "a ↦ p·b; zero over Z/p, nonzero over Z/p^2, for p = 2, 3, 5".into()))
}

/// Coefficients `base[v]` with `|v| = 2`, for forms on degree-1 generators.
fn coefficients(base: BaseRing) -> regquot::Result<Arc<QuotientRing>> {
    let r = GradedRing::new(base, vec![Generator::new("v", 2)], Window::new(12, 0))?;
    Ok(QuotientRing::full(&r))
}

fn random_diagonal(k: &Arc<QuotientRing>, n: usize, rng: &mut ChaCha8Rng) -> regquot::Result<BilinearFormData> {
    let v = k.ambient().gen("v")?;
    let q =
        (0..n).map(|_| v.scale(&regquot::scalar::int(rng.gen_range(-3..=3)))).collect::<regquot::Result<Vec<_>>>()?;
    BilinearFormData::diagonal(k, vec![1; n], q)
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("a{i}")).collect()
}

/// Rank `n ≤ 3` diagonal instances over `F_2`, `F_3` and `Z`: 20 random
/// forms per base plus the zero form of each rank.
fn instances() -> regquot::Result<Vec<Arc<CliffordAlgebra>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    for base in [BaseRing::PrimeField(2), BaseRing::PrimeField(3), BaseRing::Integers] {
        let k = coefficients(base)?;
        for n in 0..=3 {
            out.push(CliffordAlgebra::new(labels(n), BilinearFormData::zero(&k, vec![1; n]))?);
        }
        for t in 0..20 {
            let n = 1 + t % 3;
            out.push(CliffordAlgebra::new(labels(n), random_diagonal(&k, n, &mut rng)?)?);
        }
    }
    Ok(out)
}

fn sub_algebra(a: &CliffordAlgebra, range: std::ops::Range<usize>) -> regquot::Result<Arc<CliffordAlgebra>> {
    let q: Vec<RingElement> = range.clone().map(|i| a.q(i).clone()).collect();
    let form = BilinearFormData::diagonal(a.coefficients(), vec![1; range.len()], q)?;
    CliffordAlgebra::new(range.map(|i| format!("a{i}")).collect(), form)
}

fn ac5(algebras: &[Arc<CliffordAlgebra>]) -> Outcome {
    let mut ok = true;
    let mut pairs = 0usize;
    for a in algebras {
        let n = a.rank();
        let oracle = brute_force_presentation(a.labels(), a.form(), 2 * n)?;
        let basis = a.basis();
        let oracle_basis: Vec<Blade> = oracle.basis.iter().map(|w| Blade::from_indices(w)).collect();
        ok &= oracle_basis == basis;
        for u in &oracle.basis {
            for w in &oracle.basis {
                let engine = a.blade(Blade::from_indices(u)).mul(&a.blade(Blade::from_indices(w)))?;
                let expected: BTreeMap<Blade, RingElement> = oracle.products[&(u.clone(), w.clone())]
                    .iter()
                    .map(|(x, c)| (Blade::from_indices(x), c.clone()))
                    .collect();
                ok &= *engine.terms() == expected;
                pairs += 1;
            }
        }
        ok &= oracle.presentation.text == a.presentation().text;
        for m in 1..n {
            ok &= verify_kunneth(&sub_algebra(a, 0..m)?, &sub_algebra(a, m..n)?)?;
        }
    }
    Ok((
        ok,
        format!(
            "{} algebras, {pairs} basis pairs agree with the rewriting oracle; Künneth on every split",
            algebras.len()
        ),
    ))
}

fn ac6() -> Outcome {
    let mut ok = true;
    let mut checked = 0;
    for base in [BaseRing::Integers, BaseRing::PrimeField(3)] {
        let r = GradedRing::new(base, vec![], Window::new(0, 0))?;
        let k = QuotientRing::full(&r);
        for n in 1..=4usize {
            let a = CliffordAlgebra::exterior(&k, labels(n), (0..n).map(|i| v_degree(2, i) + 1).collect())?;
            for i in 0..n {
                ok &= leibniz_check(&bockstein(&a, i)?.as_operator()?, None)?;
            }
            ok &= verify_theta(&a)?.passes(n);
            checked += 1;
        }
    }
    Ok((
        ok,
        format!("{checked} exterior algebras of rank ≤ 4: Leibniz, Q_i^2 = 0, anticommutation, rank 2^n, Ψ∘Θ = Δ∘Λ(ψ)"),
    ))
}

fn random_homogeneous(r: &Arc<GradedRing>, degree: i64, rng: &mut ChaCha8Rng) -> regquot::Result<RingElement> {
    loop {
        let mut acc = r.zero();
        for m in r.degree_basis(degree)? {
            acc = acc.add(&r.monomial(m, regquot::scalar::int(rng.gen_range(0..2)))?)?;
        }
        if !acc.is_zero() {
            return Ok(acc);
        }
    }
}

fn ac7() -> Outcome {
    let r = GradedRing::new(
        BaseRing::PrimeField(2),
        vec![Generator::new("x", 2), Generator::new("y", 2)],
        Window::new(12, 0),
    )?;
    let (x, y) = (r.gen("x")?, r.gen("y")?);
    let xy = check_regular_sequence(&r, &[x.clone(), y], 12)?;
    let xx = check_regular_sequence(&r, &[x.clone(), x], 12)?;
    let mut ok = xy.is_regular() && !xx.is_regular() && xx.first_failure_index() == Some(2);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let trials = 12;
    for _ in 0..trials {
        let f = random_homogeneous(&r, 2 * rng.gen_range(1..=3), &mut rng)?;
        let g = random_homogeneous(&r, 2 * rng.gen_range(1..=3), &mut rng)?;
        ok &= tor1_equals_intersection_over_product(
            &HomogeneousIdeal::principal(&f)?,
            &HomogeneousIdeal::principal(&g)?,
            12,
        )?;
    }

    let mut oracles = 0;
    for n in 1..=2 {
        let s = MoravaScenario::with_default_window(2, n)?;
        let k = HomogeneousIdeal::new(s.ring(), s.spec().sequence().to_vec())?;
        ok &= tor_exterior_comparison(s.spec(), &k, s.ring().window().degree)?.agree();
        oracles += 1;
    }
    let z = GradedRing::new(BaseRing::Integers, vec![], Window::new(0, 0))?;
    for p in [2i64, 3] {
        let f = QuotientRingSpec::commutative(&z, vec![z.int(p.pow(4))])?;
        for e in 1..=3u32 {
            ok &= tor_exterior_comparison(&f, &HomogeneousIdeal::principal(&z.int(p.pow(e)))?, 0)?.agree();
            oracles += 1;
        }
    }
    Ok((
        ok,
        format!(
            "(x, y) regular, (x, x) fails at 2 up to D = 12; {trials} random Tor_1 pairs; {oracles} Tor/Λ rank oracles"
        ),
    ))
}

fn ac8() -> Outcome {
    let r = GradedRing::new(
        BaseRing::PrimeField(2),
        vec![Generator::new("x", 2), Generator::new("y", 2)],
        Window::new(12, 0),
    )?;
    let first = decompose_conormal(
        &[HomogeneousIdeal::principal(&r.gen("x")?)?, HomogeneousIdeal::principal(&r.gen("y")?)?],
        12,
    )?;
    let z = GradedRing::new(BaseRing::Integers, vec![Generator::new("v1", 0)], Window::new(12, 0))?;
    let second = decompose_conormal(
        &[HomogeneousIdeal::principal(&z.int(2))?, HomogeneousIdeal::principal(&z.parse("v1 - 2")?)?],
        12,
    )?;
    let ok = first.mutually_inverse()
        && second.mutually_inverse()
        && !first.degrees.is_empty()
        && !second.degrees.is_empty();
    Ok((ok, "((x), (y)) over F_2[x, y] and ((2), (v1 − 2)) over Z[v1]: mutually inverse up to D = 12".into()))
}

fn ac9(algebras: &[Arc<CliffordAlgebra>]) -> Outcome {
    let mut ok = true;
    for a in algebras {
        let basis: Vec<_> = a.basis().into_iter().map(|b| a.blade(b)).collect();
        for u in &basis {
            ok &= u.antipode().antipode() == *u;
            for v in &basis {
                ok &= u.mul(v)?.antipode() == u.antipode().mul(&v.antipode())?;
            }
        }
        let one = a.one();
        for i in 0..a.rank() {
            let ai = a.generator(i)?;
            ok &= TensorElement::pure(&ai, &one)?.swap()? == TensorElement::pure(&one, &ai)?;
            for j in 0..a.rank() {
                let aj = a.generator(j)?;
                let swapped = TensorElement::pure(&ai, &aj)?.swap()?;
                ok &= swapped == TensorElement::pure(&aj.neg(), &ai)?;
            }
        }
    }
    Ok((ok, format!("α is an involutive automorphism on {} algebras; τ(a⊗1) = 1⊗a, τ(a⊗b) = −b⊗a", algebras.len())))
}

fn main() {
    let algebras = match instances() {
        Ok(a) => a,
        Err(e) => {
            println!("could not build the rank ≤ 3 instances: {e}");
            std::process::exit(1);
        }
    };
    let criteria: Vec<Criterion> = vec![
        ("AC1", "Morava homology, odd p", Box::new(ac1)),
        ("AC2", "Morava homology, p = 2", Box::new(ac2)),
        ("AC3", "characteristic form, p = 2", Box::new(ac3)),
        ("AC4", "induced map Z/p^4 -> Z/p^3", Box::new(ac4)),
        ("AC5", "oracle equivalence", Box::new(|| ac5(&algebras))),
        ("AC6", "derivation suite", Box::new(ac6)),
        ("AC7", "Koszul/Tor suite", Box::new(ac7)),
        ("AC8", "conormal decomposition", Box::new(ac8)),
        ("AC9", "antipode and twist", Box::new(|| ac9(&algebras))),
    ];
    let mut failed = 0;
    for (id, title, check) in &criteria {
        let start = Instant::now();
        let (ok, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{id} {} {title}: {detail} [tolerance: exact] ({})",
            if ok { "PASS" } else { "FAIL" },
            secs(start.elapsed())
        );
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
