//! Randomised vertex-algebra axioms and the closed-form low-degree identities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::field::{binomial, Field, Scalar};
use crate::linalg::SVec;
use crate::report::{Check, SuiteReport};

use super::engine::AffineVertexAlgebra;
use super::state::{Factor, Monomial, State};
use super::text::format_state;

/// Mode indices `m, n, p` are drawn from `-MODE_RANGE..=MODE_RANGE`.
pub const MODE_RANGE: i64 = 3;


#[derive(Clone, Debug)]
pub struct AxiomOptions {
    pub max_degree: u32,
    pub samples: usize,
    pub seed: u64,
    /// Bound on the degree of intermediate states; samples exceeding it are
    /// redrawn. Unbounded by default.
    pub work_degree: u32,
}

impl AxiomOptions {
    pub fn new(max_degree: u32, samples: usize, seed: u64) -> Self {
        AxiomOptions {
            max_degree,
            samples,
            seed,
            work_degree: u32::MAX,
        }
    }
}

/// A random PBW monomial of degree `deg`.
fn random_monomial(rng: &mut ChaCha8Rng, dim: usize, deg: u32) -> Monomial {
    let mut left = deg;
    let mut f = Vec::new();
    while left > 0 {
        let m = rng.gen_range(1..=left);
        f.push(Factor {
            m,
            i: rng.gen_range(0..dim) as u32,
        });
        left -= m;
    }
    Monomial::from_factors(f)
}

fn random_coeff(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    loop {
        let c = field.int(rng.gen_range(-3..=3));
        if !c.is_zero() {
            return c;
        }
    }
}

/// A homogeneous state of degree `deg`: one or two random monomials.
pub fn random_state(va: &AffineVertexAlgebra, rng: &mut ChaCha8Rng, deg: u32) -> State {
    let field = va.field();
    let dim = va.lie().dim();
    let terms = if deg == 0 { 1 } else { rng.gen_range(1..=2) };
    let mut s = State::zero();
    for _ in 0..terms {
        s.add_term(random_monomial(rng, dim, deg), random_coeff(rng, field));
    }
    if s.is_zero() {
        s = State::monomial(random_monomial(rng, dim, deg), field.one());
    }
    s
}

#[derive(Clone, Debug)]
struct Sample {
    a: State,
    b: State,
    c: State,
    da: i64,
    db: i64,
    dc: i64,
    m: i64,
    n: i64,
    p: i64,
}

impl Sample {
    /// Largest degree of a state touched while checking this sample.
    fn work_degree(&self) -> i64 {
        let (a, b, c, m, n, p) = (self.da, self.db, self.dc, self.m, self.n, self.p);
        [
            // skew symmetry and truncation
            a + b - 1 - n,
            // iterate
            a + b - 1 - m,
            b + c - 1 - n,
            a + c - 1,
            a + b + c - 2 - m - n,
            // Borcherds
            a + b - 1 - p,
            a + c - 1 - m,
            a + b + c - 2 - m - n - p,
            // translation
            a - n - 1,
        ]
        .into_iter()
        .max()
        .unwrap_or(0)
    }
}

fn draw_samples(va: &AffineVertexAlgebra, opts: &AxiomOptions) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::with_capacity(opts.samples);
    while out.len() < opts.samples {
        let da = rng.gen_range(0..=opts.max_degree);
        let db = rng.gen_range(0..=opts.max_degree);
        let dc = rng.gen_range(0..=opts.max_degree);
        let m = rng.gen_range(-MODE_RANGE..=MODE_RANGE);
        let n = rng.gen_range(-MODE_RANGE..=MODE_RANGE);
        let p = rng.gen_range(-MODE_RANGE..=MODE_RANGE);
        let a = random_state(va, &mut rng, da);
        let b = random_state(va, &mut rng, db);
        let c = random_state(va, &mut rng, dc);
        let s = Sample {
            a,
            b,
            c,
            da: da as i64,
            db: db as i64,
            dc: dc as i64,
            m,
            n,
            p,
        };
        if s.work_degree() <= opts.work_degree as i64 {
            out.push(s);
        }
    }
    out
}

fn int(field: Field, c: &num_bigint::BigInt) -> Scalar {
    field.bigint(c)
}

/// `D^{(k)}` from the divided-power translation rule
/// `D^{(k)} b_1(-m_1)⋯b_r(-m_r)𝟙 = Σ Π C(m_l + i_l - 1, i_l) b_1(-m_1-i_1)⋯𝟙`,
/// summed over compositions `i_1 + ⋯ + i_r = k`.
pub fn translation_oracle(va: &AffineVertexAlgebra, k: u32, v: &State) -> State {
    let field = va.field();
    let mut out = State::zero();
    for (mono, c) in v.terms() {
        let f = mono.factors();
        let mut parts = vec![0u32; f.len()];
        compositions(k, &mut parts, 0, &mut |parts| {
            let mut coeff = c.clone();
            for (x, &i) in f.iter().zip(parts.iter()) {
                coeff = &coeff * &int(field, &binomial(x.m as i64 + i as i64 - 1, i));
            }
            let mut s = State::monomial(Monomial::vacuum(), coeff);
            for (x, &i) in f.iter().zip(parts.iter()).rev() {
                s = va.mode_state(x.i, -(x.m as i64) - i as i64, &s);
            }
            out = out.add(&s);
        });
    }
    out
}

fn compositions(k: u32, parts: &mut Vec<u32>, at: usize, f: &mut impl FnMut(&[u32])) {
    if at == parts.len() {
        if k == 0 {
            f(parts);
        }
        return;
    }
    if at + 1 == parts.len() {
        parts[at] = k;
        f(parts);
        return;
    }
    for i in 0..=k {
        parts[at] = i;
        compositions(k - i, parts, at + 1, f);
    }
}

struct Ctx<'a> {
    va: &'a AffineVertexAlgebra,
}

impl Ctx<'_> {
    fn prod(&self, u: &State, n: i64, v: &State) -> State {
        self.va.product_states(u, n, v)
    }

    fn int(&self, c: num_bigint::BigInt) -> Scalar {
        self.va.field().bigint(&c)
    }

    fn mismatch(&self, what: String, lhs: &State, rhs: &State) -> Option<String> {
        (lhs != rhs).then(|| {
            format!(
                "{what}: lhs = {}, rhs = {}",
                format_state(self.va, lhs),
                format_state(self.va, rhs)
            )
        })
    }

    fn describe(&self, s: &Sample) -> String {
        format!(
            "a = {}, b = {}, c = {}, m = {}, n = {}, p = {}",
            format_state(self.va, &s.a),
            format_state(self.va, &s.b),
            format_state(self.va, &s.c),
            s.m,
            s.n,
            s.p
        )
    }

    fn truncation(&self, s: &Sample) -> Option<String> {
        let top = s.da + s.db;
        for k in top..top + 3 {
            let x = self.prod(&s.a, k, &s.b);
            if !x.is_zero() {
                return Some(format!("a_{k} b ≠ 0 for {}", self.describe(s)));
            }
        }
        let x = self.prod(&s.a, s.n, &s.b);
        let want = s.da + s.db - 1 - s.n;
        if !x.is_zero() && x.homogeneous_degree() != Some(want as u32) {
            return Some(format!("a_n b is not of degree {want} for {}", self.describe(s)));
        }
        None
    }

    fn vacuum(&self, s: &Sample) -> Option<String> {
        let vac = self.va.vacuum();
        let lhs = self.prod(&vac, s.n, &s.a);
        let rhs = if s.n == -1 { s.a.clone() } else { State::zero() };
        if let Some(e) = self.mismatch(format!("vac_{} a for {}", s.n, self.describe(s)), &lhs, &rhs) {
            return Some(e);
        }
        let lhs = self.prod(&s.a, -1, &vac);
        self.mismatch(format!("a_-1 vac for {}", self.describe(s)), &lhs, &s.a)
    }

    fn d_derivative(&self, s: &Sample) -> Option<String> {
        let vac = self.va.vacuum();
        let lhs = self.prod(&s.a, s.n, &vac);
        let rhs = if s.n >= 0 {
            State::zero()
        } else {
            translation_oracle(self.va, (-s.n - 1) as u32, &s.a)
        };
        self.mismatch(format!("a_{} vac for {}", s.n, self.describe(s)), &lhs, &rhs)
    }

    fn skew(&self, s: &Sample) -> Option<String> {
        let n = s.n;
        let lhs = self.prod(&s.a, n, &s.b);
        let mut rhs = State::zero();
        let top = s.da + s.db - 1 - n;
        for i in 0..=top {
            let x = self.prod(&s.b, n + i, &s.a);
            if x.is_zero() {
                continue;
            }
            let dx = self.prod(&x, -i - 1, &self.va.vacuum());
            let sign = if (i + n + 1) % 2 == 0 { 1 } else { -1 };
            rhs.add_scaled(&dx, &self.va.field().int(sign));
        }
        self.mismatch(format!("skew symmetry for {}", self.describe(s)), &lhs, &rhs)
    }

    fn iterate(&self, s: &Sample) -> Option<String> {
        let (m, n) = (s.m, s.n);
        let lhs = self.prod(&self.prod(&s.a, m, &s.b), n, &s.c);
        let top = (s.db + s.dc - 1 - n).max(s.da + s.dc - 1);
        let mut rhs = State::zero();
        let sm = if m % 2 == 0 { 1 } else { -1 };
        for i in 0..=top {
            let c = self.int(binomial(m, i as u32) * if i % 2 == 0 { 1 } else { -1 });
            if c.is_zero() {
                continue;
            }
            let t1 = self.prod(&s.a, m - i, &self.prod(&s.b, n + i, &s.c));
            let t2 = self.prod(&s.b, n + m - i, &self.prod(&s.a, i, &s.c));
            let t = t1.sub(&t2.scale(&self.va.field().int(sm)));
            rhs.add_scaled(&t, &c);
        }
        self.mismatch(format!("iterate for {}", self.describe(s)), &lhs, &rhs)
    }

    fn borcherds(&self, s: &Sample) -> Option<String> {
        let (m, n, p) = (s.m, s.n, s.p);
        let mut lhs = State::zero();
        for i in 0..=(s.da + s.db - 1 - p) {
            let c = self.int(binomial(m, i as u32));
            if c.is_zero() {
                continue;
            }
            let ab = self.prod(&s.a, p + i, &s.b);
            lhs.add_scaled(&self.prod(&ab, m + n - i, &s.c), &c);
        }
        let mut rhs = State::zero();
        let sp = if p % 2 == 0 { 1 } else { -1 };
        let top = (s.db + s.dc - 1 - n).max(s.da + s.dc - 1 - m);
        for i in 0..=top {
            let c = self.int(binomial(p, i as u32) * if i % 2 == 0 { 1 } else { -1 });
            if c.is_zero() {
                continue;
            }
            let t1 = self.prod(&s.a, m + p - i, &self.prod(&s.b, n + i, &s.c));
            let t2 = self.prod(&s.b, n + p - i, &self.prod(&s.a, m + i, &s.c));
            let t = t1.sub(&t2.scale(&self.va.field().int(sp)));
            rhs.add_scaled(&t, &c);
        }
        self.mismatch(format!("Borcherds for {}", self.describe(s)), &lhs, &rhs)
    }
}

pub const AXIOM_CHECKS: [&str; 6] = [
    "truncation",
    "vacuum",
    "d-derivative",
    "skew-symmetry",
    "iterate",
    "borcherds",
];

/// Vertex-algebra axioms on seeded random homogeneous states.
pub fn axiom_suite(va: &AffineVertexAlgebra, opts: &AxiomOptions) -> SuiteReport {
    let samples = draw_samples(va, opts);
    let ctx = Ctx { va };
    let results: Vec<[Option<String>; 6]> = samples
        .par_iter()
        .map(|s| {
            [
                ctx.truncation(s),
                ctx.vacuum(s),
                ctx.d_derivative(s),
                ctx.skew(s),
                ctx.iterate(s),
                ctx.borcherds(s),
            ]
        })
        .collect();
    let checks = AXIOM_CHECKS
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let col: Vec<Option<String>> = results.iter().map(|r| r[k].clone()).collect();
            Check::from_results(name, &col)
        })
        .collect();
    SuiteReport::new("axioms", checks)
}

/// `u(-1) v(-1) 𝟙` for `u, v ∈ g`, normal ordered by hand.
fn pbw_pair(va: &AffineVertexAlgebra, u: &SVec, v: &SVec) -> State {
    let g = va.lie();
    let mut out = State::zero();
    for (i, x) in &u.0 {
        for (j, y) in &v.0 {
            let c = x * y;
            let (hi, lo) = if i >= j { (*i, *j) } else { (*j, *i) };
            out.add_term(
                Monomial::from_factors(vec![
                    Factor { m: 1, i: hi as u32 },
                    Factor { m: 1, i: lo as u32 },
                ]),
                c.clone(),
            );
            if i < j {
                for (k, z) in &g.bracket_basis(*i, *j).0 {
                    out.add_term(Monomial::single(2, *k as u32), &c * z);
                }
            }
        }
    }
    out
}

fn basis(i: usize, field: Field) -> SVec {
    SVec(vec![(i, field.one())])
}

pub const LEMMA_CHECKS: [&str; 14] = [
    "a_0 b = [a,b]",
    "a_1 b = <a,b> vac",
    "a_0 b_-1 c",
    "a_1 b_-1 c",
    "a_2 b_-1 c",
    "a_2 b_-1 b = 0",
    "a_0 a_0 b_-1 b",
    "a_-1 a_1 b_-1 b",
    "a_2 a_0 b_-1 b = 0",
    "a_1 a_1 b_-1 b",
    "(a_-1 a)_1 b",
    "b_1 a_-1 a",
    "(a_-2 vac)_1 b = -[a,b]",
    "jacobi cancellation",
];

/// The closed-form identities in degrees up to two, on all basis pairs and
/// triples, compared with the engine.
pub fn comp_lemma_suite(va: &AffineVertexAlgebra) -> SuiteReport {
    let g = va.lie();
    let d = g.dim();
    let field = va.field();
    let two = field.int(2);
    let gen = |x: &SVec| va.from_lie(x);
    let prod = |u: &State, n: i64, v: &State| va.product_states(u, n, v);
    let vac = va.vacuum();
    let pair = |u: &SVec, v: &SVec| pbw_pair(va, u, v);
    let br = |x: &SVec, y: &SVec| g.bracket_sparse(x, y);
    let lab = |i: usize| g.labels()[i].clone();
    let cmp = |what: String, lhs: State, rhs: State| -> Option<String> {
        (lhs != rhs).then(|| {
            format!(
                "{what}: engine {}, closed form {}",
                format_state(va, &lhs),
                format_state(va, &rhs)
            )
        })
    };

    let per_a: Vec<Vec<Vec<Option<String>>>> = (0..d)
        .into_par_iter()
        .map(|ia| {
            let mut res: Vec<Vec<Option<String>>> = vec![Vec::new(); LEMMA_CHECKS.len()];
            let a = basis(ia, field);
            let ga = gen(&a);
            for ib in 0..d {
                let b = basis(ib, field);
                let gb = gen(&b);
                let ab = br(&a, &b);
                let kab = g.kappa(ia, ib).clone();
                let tag = format!("a = {}, b = {}", lab(ia), lab(ib));

                res[0].push(cmp(tag.clone(), prod(&ga, 0, &gb), gen(&ab)));
                res[1].push(cmp(tag.clone(), prod(&ga, 1, &gb), vac.scale(&kab)));

                for ic in 0..d {
                    let c = basis(ic, field);
                    let gc = gen(&c);
                    let bc = prod(&gb, -1, &gc);
                    let tag3 = format!("{tag}, c = {}", lab(ic));
                    let rhs = pair(&b, &br(&a, &c)).add(&pair(&ab, &c));
                    res[2].push(cmp(tag3.clone(), prod(&ga, 0, &bc), rhs));
                    let lie = br(&ab, &c)
                        .add(&c.scale(&kab))
                        .add(&b.scale(g.kappa(ia, ic)));
                    res[3].push(cmp(tag3.clone(), prod(&ga, 1, &bc), gen(&lie)));
                    let k = g.pairing(&ab, &c);
                    res[4].push(cmp(tag3, prod(&ga, 2, &bc), vac.scale(&k)));
                }

                let bb = prod(&gb, -1, &gb);
                res[5].push(cmp(tag.clone(), prod(&ga, 2, &bb), State::zero()));

                let a_ab = br(&a, &ab);
                let lhs = prod(&ga, 0, &prod(&ga, 0, &bb));
                let rhs = pair(&ab, &ab)
                    .scale(&two)
                    .add(&pair(&b, &a_ab))
                    .add(&pair(&a_ab, &b));
                res[6].push(cmp(tag.clone(), lhs, rhs));

                let abb = br(&ab, &b);
                let lhs = prod(&ga, -1, &prod(&ga, 1, &bb));
                let rhs = pair(&a, &abb).add(&pair(&a, &b).scale(&(&two * &kab)));
                res[7].push(cmp(tag.clone(), lhs, rhs));

                let lhs = prod(&ga, 2, &prod(&ga, 0, &bb));
                res[8].push(cmp(tag.clone(), lhs, State::zero()));

                let lhs = prod(&ga, 1, &prod(&ga, 1, &bb));
                let k = &(&two * &(&kab * &kab)) - &g.pairing(&ab, &ab);
                res[9].push(cmp(tag.clone(), lhs, vac.scale(&k)));

                let aa = prod(&ga, -1, &ga);
                let closed = gen(&a_ab.add(&a.scale(&(&two * &kab))));
                res[10].push(cmp(tag.clone(), prod(&aa, 1, &gb), closed.clone()));
                res[11].push(cmp(tag.clone(), prod(&gb, 1, &aa), closed));

                let a2 = prod(&ga, -2, &vac);
                res[12].push(cmp(tag.clone(), prod(&a2, 1, &gb), gen(&ab.scale(&-field.one()))));

                let x = pair(&a, &abb)
                    .sub(&pair(&abb, &a))
                    .add(&pair(&b, &a_ab))
                    .sub(&pair(&a_ab, &b));
                let ga_abb = prod(&ga, -1, &gen(&abb));
                let gabb_a = prod(&gen(&abb), -1, &ga);
                let gb_aab = prod(&gb, -1, &gen(&a_ab));
                let gaab_b = prod(&gen(&a_ab), -1, &gb);
                let engine = ga_abb.sub(&gabb_a).add(&gb_aab).sub(&gaab_b);
                let mut e = cmp(format!("{tag} (engine)"), engine, State::zero());
                if e.is_none() {
                    e = cmp(format!("{tag} (closed form)"), x, State::zero());
                }
                res[13].push(e);
            }
            res
        })
        .collect();

    let checks = LEMMA_CHECKS
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let col: Vec<Option<String>> = per_a.iter().flat_map(|r| r[k].clone()).collect();
            Check::from_results(name, &col)
        })
        .collect();
    SuiteReport::new("comp-lemmas", checks)
}
