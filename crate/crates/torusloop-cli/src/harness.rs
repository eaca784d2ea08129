//! Seeded verification suites over loop groups.

use std::collections::BTreeMap;
use std::fmt::Debug;

use clap::ValueEnum;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;
use torusloop::foundation::{rat, vadd, vfrom_int, Angle, IntMatrix};
use torusloop::lattice::Lattice;
use torusloop::loops::{
    random, Arc, BicolouredGroup, BicolouredLoop, Embedding, ExtensionElement, LoopError, LoopGroup, PLLoop,
    PLPath, PLReparam,
};
use num_traits::ToPrimitive;
use torusloop::series::eta_inverse_power;
use torusloop::span::{Colour, LatticeSpan};

use crate::fock::{
    coherent, energy_dims, fock_inner, fourier_s, heisenberg_multiply, inner_j, random_loop, s_form, tail_bound,
    weyl_apply, Coherents, FockVector, FourierLoop, Gram, ProbeBasis, C,
};
use crate::formats::{loop_from_value, loop_json, rat_json, vec_json};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Cocycle,
    Commutator,
    Disjoint,
    Graded,
    Diffaction,
    Autaction,
    Bicoloured,
    Pth,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Cocycle => "cocycle",
            Suite::Commutator => "commutator",
            Suite::Disjoint => "disjoint",
            Suite::Graded => "graded",
            Suite::Diffaction => "diffaction",
            Suite::Autaction => "autaction",
            Suite::Bicoloured => "bicoloured",
            Suite::Pth => "pth",
        }
    }
}

/// The invariant each suite checks, shown in `verify --help`.
pub const SUITE_TABLE: &str = "\
Suite        Invariant
cocycle      c(a,b)+c(a+b,c) = c(a,b+c)+c(b,c); c(a,1) = c(1,a) = 0; lift independence; group law
commutator   c(a,b)-c(b,a) equals the closed-form commutator
disjoint     loops with disjoint supports commute (even lattices and spans; spans include arcs around p and q)
graded       disjoint loops on any lattice have commutator 1/2 p(a)p(b), p = parity of the winding
diffaction   d(psi.phi,a) = d(psi,phi.a)+d(phi,a); d and c transform as a cochain; local triviality
autaction    lattice isometries lift: de = r, the action is a homomorphism commuting with reparametrization
bicoloured   Bi and the coloured embeddings preserve sums, cocycles and the reparametrization cochain
pth          Pth, Delta and Delta' are homomorphisms; standard loops are a section of Delta";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("suite {0} needs a span (--span or a span file)")]
    NeedsSpan(&'static str),
    #[error("suite {0} needs a lattice (--builtin or a lattice file)")]
    NeedsLattice(&'static str),
    #[error("suite {0} needs an even lattice")]
    NeedsEven(&'static str),
    #[error("suite {0} does not take --loops")]
    NoLoopInput(&'static str),
    #[error("--loops needs at least one loop")]
    EmptyLoops,
    #[error("loop {index}: {msg}")]
    BadLoop { index: usize, msg: String },
}

pub enum Target {
    Lattice(Lattice),
    Span(LatticeSpan),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub seed: u64,
    pub sample: u64,
    pub check: &'static str,
    pub inputs: Value,
    pub expected: Value,
    pub actual: Value,
}

impl Counterexample {
    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "sample": self.sample,
            "check": self.check,
            "inputs": self.inputs,
            "expected": self.expected,
            "actual": self.actual,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub suite: Suite,
    pub samples: u64,
    pub checks: u64,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug)]
struct Fail {
    check: &'static str,
    inputs: Value,
    expected: Value,
    actual: Value,
}

type Check = Result<(), Fail>;

/// Counts checks and records the inputs of the current sample.
struct Ctx<F: Fn() -> Value> {
    checks: u64,
    inputs: F,
}

impl<F: Fn() -> Value> Ctx<F> {
    fn eq<T: PartialEq + Debug>(&mut self, check: &'static str, expected: T, actual: T) -> Check {
        self.checks += 1;
        if expected == actual {
            return Ok(());
        }
        Err(Fail { check, inputs: (self.inputs)(), expected: show(&expected), actual: show(&actual) })
    }

    fn holds(&mut self, check: &'static str, cond: bool) -> Check {
        self.eq(check, true, cond)
    }

    fn ok<T>(&self, check: &'static str, r: Result<T, LoopError>) -> Result<T, Fail> {
        r.map_err(|e| Fail { check, inputs: (self.inputs)(), expected: json!("no error"), actual: json!(e.to_string()) })
    }
}

fn show<T: Debug>(x: &T) -> Value {
    let s = format!("{x:?}");
    match s.strip_prefix("Angle(").and_then(|t| t.strip_suffix(')')) {
        Some(a) => crate::formats::parse_rational(a).map_or_else(|| json!(a), |q| rat_json(&q)),
        None => json!(s),
    }
}

fn angle(x: BigInt, d: i64) -> Angle {
    Angle::new(num_rational::BigRational::new(x, d.into()))
}

fn uni_json(a: &PLLoop) -> Value {
    loop_json(a.lift(), None)
}

fn bi_json(a: &BicolouredLoop) -> Value {
    loop_json(a.lift(), Some(a.mq()))
}

fn reparam_json(phi: &PLReparam) -> Value {
    json!({ "cover": phi.cover(), "x": vec_json(phi.knots_x()), "y": vec_json(phi.knots_y()) })
}

fn sample_rng(seed: u64, sample: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(sample);
    r
}

fn is_identity_span(s: &LatticeSpan) -> bool {
    let id = IntMatrix::identity(s.rank());
    s.white.gram() == s.gamma.gram() && s.black.gram() == s.gamma.gram() && s.embed_w == id && s.embed_b == id
}

/// −1 and the reflections in basis vectors of norm 2.
pub fn automorphisms(l: &Lattice) -> Vec<IntMatrix> {
    let n = l.rank();
    let g = l.gram().to_rows();
    let minus: Vec<Vec<BigInt>> = (0..n).map(|k| (0..n).map(|j| BigInt::from(-((k == j) as i64))).collect()).collect();
    let mut out = vec![IntMatrix::from_rows(&minus)];
    for i in 0..n {
        if g[i][i] == BigInt::from(2) {
            let rows: Vec<Vec<BigInt>> = (0..n)
                .map(|k| (0..n).map(|j| BigInt::from((k == j) as i64) - if k == i { g[i][j].clone() } else { 0.into() }).collect())
                .collect();
            out.push(IntMatrix::from_rows(&rows));
        }
    }
    out
}

enum Group {
    Uni(LoopGroup),
    Bi(BicolouredGroup),
}

enum Given {
    None,
    Uni(Vec<PLLoop>),
    Bi(Vec<BicolouredLoop>),
}

fn parse_given(group: &Group, loops: &[Value]) -> Result<Given, HarnessError> {
    if loops.is_empty() {
        return Err(HarnessError::EmptyLoops);
    }
    let bad = |index: usize, msg: String| HarnessError::BadLoop { index, msg };
    match group {
        Group::Uni(g) => loops
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let (p, _) = loop_from_value(v, g.rank()).map_err(|e| bad(i, e.to_string()))?;
                g.make_loop(p).map_err(|e| bad(i, e.to_string()))
            })
            .collect::<Result<_, _>>()
            .map(Given::Uni),
        Group::Bi(g) => loops
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let (p, mq) = loop_from_value(v, g.rank()).map_err(|e| bad(i, e.to_string()))?;
                let mq = mq.ok_or_else(|| bad(i, "bicoloured loops need mq".into()))?;
                g.make_loop(p, mq).map_err(|e| bad(i, e.to_string()))
            })
            .collect::<Result<_, _>>()
            .map(Given::Bi),
    }
}

/// Runs `samples` seeded samples of a suite, or every triple of the given loops.
pub fn run(suite: Suite, target: &Target, samples: u64, seed: u64, loops: Option<&[Value]>) -> Result<Outcome, HarnessError> {
    let name = suite.name();
    let group = match target {
        Target::Lattice(l) => Group::Uni(LoopGroup::new(l.clone())),
        Target::Span(s) => Group::Bi(BicolouredGroup::new(s)),
    };
    match (&group, suite) {
        (Group::Uni(_), Suite::Bicoloured | Suite::Pth) => return Err(HarnessError::NeedsSpan(name)),
        (Group::Bi(_), Suite::Graded | Suite::Autaction) => return Err(HarnessError::NeedsLattice(name)),
        (Group::Uni(g), Suite::Disjoint | Suite::Diffaction | Suite::Autaction) if !g.lattice().is_even() => {
            return Err(HarnessError::NeedsEven(name))
        }
        _ => {}
    }
    let given = match loops {
        None => Given::None,
        Some(_) if !matches!(suite, Suite::Cocycle | Suite::Commutator) => return Err(HarnessError::NoLoopInput(name)),
        Some(v) => parse_given(&group, v)?,
    };
    let count = match &given {
        Given::None => samples,
        Given::Uni(v) => v.len().pow(3) as u64,
        Given::Bi(v) => v.len().pow(3) as u64,
    };
    let autos = match target {
        Target::Lattice(l) if suite == Suite::Autaction => automorphisms(l),
        _ => vec![],
    };
    let embedded = match target {
        Target::Span(s) if suite == Suite::Bicoloured => Some(if is_identity_span(s) {
            LoopGroup::new(s.gamma.clone())
        } else {
            LoopGroup::with_cocycle(s.gamma.clone(), s.derive().gamma_eps())
        }),
        _ => None,
    };
    let mut checks = 0;
    for i in 0..count {
        let mut r = sample_rng(seed, i);
        let pick3 = |n: usize| ((i as usize) / (n * n), (i as usize / n) % n, i as usize % n);
        let res = match (&group, suite) {
            (Group::Uni(g), Suite::Cocycle) => {
                let (a, b, c) = match &given {
                    Given::Uni(v) => {
                        let (x, y, z) = pick3(v.len());
                        (v[x].clone(), v[y].clone(), v[z].clone())
                    }
                    _ => (random::unicoloured(&mut r, g), random::unicoloured(&mut r, g), random::unicoloured(&mut r, g)),
                };
                uni_cocycle(g, a, b, c, &mut r, &mut checks)
            }
            (Group::Bi(g), Suite::Cocycle) => {
                let (a, b, c) = match &given {
                    Given::Bi(v) => {
                        let (x, y, z) = pick3(v.len());
                        (v[x].clone(), v[y].clone(), v[z].clone())
                    }
                    _ => (random::bicoloured(&mut r, g), random::bicoloured(&mut r, g), random::bicoloured(&mut r, g)),
                };
                bi_cocycle(g, a, b, c, &mut r, &mut checks)
            }
            (Group::Uni(g), Suite::Commutator) => {
                let (a, b) = match &given {
                    Given::Uni(v) => {
                        let (_, y, z) = pick3(v.len());
                        (v[y].clone(), v[z].clone())
                    }
                    _ => (random::unicoloured(&mut r, g), random::unicoloured(&mut r, g)),
                };
                let mut cx = Ctx { checks: 0, inputs: || json!({ "a": uni_json(&a), "b": uni_json(&b) }) };
                let res = cx
                    .ok("commutator", g.commutator(&a, &b))
                    .and_then(|lhs| cx.eq("commutator closed form", g.commutator_closed_form(&a, &b), lhs));
                checks += cx.checks;
                res
            }
            (Group::Bi(g), Suite::Commutator) => {
                let (a, b) = match &given {
                    Given::Bi(v) => {
                        let (_, y, z) = pick3(v.len());
                        (v[y].clone(), v[z].clone())
                    }
                    _ => (random::bicoloured(&mut r, g), random::bicoloured(&mut r, g)),
                };
                let mut cx = Ctx { checks: 0, inputs: || json!({ "a": bi_json(&a), "b": bi_json(&b) }) };
                let res = (|| {
                    let lhs = cx.ok("commutator", g.commutator(&a, &b))?;
                    let rhs = cx.ok("commutator closed form", g.commutator_closed_form(&a, &b))?;
                    cx.eq("commutator closed form", rhs, lhs)
                })();
                checks += cx.checks;
                res
            }
            (Group::Uni(g), Suite::Disjoint) => uni_disjoint(g, &mut r, false, &mut checks),
            (Group::Uni(g), Suite::Graded) => uni_disjoint(g, &mut r, true, &mut checks),
            (Group::Bi(g), Suite::Disjoint) => bi_disjoint(g, &mut r, i % 2 == 1, &mut checks),
            (Group::Uni(g), Suite::Diffaction) => uni_diffaction(g, &mut r, &mut checks),
            (Group::Bi(g), Suite::Diffaction) => bi_diffaction(g, &mut r, &mut checks),
            (Group::Uni(g), Suite::Autaction) => {
                let m = &autos[r.gen_range(0..autos.len())];
                uni_autaction(g, m, &mut r, &mut checks)
            }
            (Group::Bi(g), Suite::Bicoloured) => bicoloured(g, embedded.as_ref().expect("set above"), &mut r, &mut checks),
            (Group::Bi(g), Suite::Pth) => pth(g, &mut r, &mut checks),
            _ => unreachable!("rejected above"),
        };
        if let Err(f) = res {
            let counterexample =
                Counterexample { seed, sample: i, check: f.check, inputs: f.inputs, expected: f.expected, actual: f.actual };
            return Ok(Outcome { suite, samples: i + 1, checks, counterexample: Some(counterexample) });
        }
    }
    Ok(Outcome { suite, samples: count, checks, counterexample: None })
}

fn random_element<L, F: FnMut(&mut ChaCha8Rng) -> L>(r: &mut ChaCha8Rng, mut f: F) -> ExtensionElement<L> {
    let base = f(r);
    ExtensionElement::new(base, Angle::new(random::rational(r, 1)))
}

fn uni_cocycle(g: &LoopGroup, a: PLLoop, b: PLLoop, c: PLLoop, r: &mut ChaCha8Rng, checks: &mut u64) -> Check {
    let shift = vfrom_int(&random::int_vector(r, g.rank(), 3));
    let (pa, pb, pc) = (
        Angle::new(random::rational(r, 1)),
        Angle::new(random::rational(r, 1)),
        Angle::new(random::rational(r, 1)),
    );
    let mut cx = Ctx {
        checks: 0,
        inputs: || json!({ "a": uni_json(&a), "b": uni_json(&b), "c": uni_json(&c), "shift": vec_json(&shift) }),
    };
    let res = (|| {
        let ab = cx.ok("cocycle", g.cocycle(&a, &b))?;
        let ab_c = cx.ok("cocycle", g.cocycle(&g.add(&a, &b), &c))?;
        let a_bc = cx.ok("cocycle", g.cocycle(&a, &g.add(&b, &c)))?;
        let bc = cx.ok("cocycle", g.cocycle(&b, &c))?;
        cx.eq("cocycle relation", ab.clone() + ab_c, a_bc + bc)?;
        cx.eq("normalization c(a,1)", Angle::zero(), cx.ok("cocycle", g.cocycle(&a, &g.identity()))?)?;
        cx.eq("normalization c(1,a)", Angle::zero(), cx.ok("cocycle", g.cocycle(&g.identity(), &a))?)?;
        let a2 = cx.ok("lift", g.make_loop(a.lift().add_const(&shift)))?;
        let b2 = cx.ok("lift", g.make_loop(b.lift().add_const(&shift)))?;
        cx.holds("shifted lift is the same loop", g.loops_equal(&a, &a2))?;
        cx.eq("lift independence", ab, cx.ok("cocycle", g.cocycle(&a2, &b2))?)?;
        let (x, y, z) = (
            ExtensionElement::new(a.clone(), pa.clone()),
            ExtensionElement::new(b.clone(), pb.clone()),
            ExtensionElement::new(c.clone(), pc.clone()),
        );
        let left = cx.ok("multiply", g.multiply(&cx.ok("multiply", g.multiply(&x, &y))?, &z))?;
        let right = cx.ok("multiply", g.multiply(&x, &cx.ok("multiply", g.multiply(&y, &z))?))?;
        cx.holds("associativity", g.elements_equal(&left, &right))?;
        let inv = cx.ok("multiply", g.multiply(&x, &g.inverse(&x)))?;
        cx.holds("inverse", g.elements_equal(&inv, &g.unit()))
    })();
    *checks += cx.checks;
    res
}

fn bi_cocycle(g: &BicolouredGroup, a: BicolouredLoop, b: BicolouredLoop, c: BicolouredLoop, r: &mut ChaCha8Rng, checks: &mut u64) -> Check {
    let shift = vfrom_int(&random::int_vector(r, g.rank(), 3));
    let mu = random::int_vector(r, g.rank(), 2);
    let nu = random::int_vector(r, g.rank(), 2);
    let (pa, pb, pc) = (
        Angle::new(random::rational(r, 1)),
        Angle::new(random::rational(r, 1)),
        Angle::new(random::rational(r, 1)),
    );
    let ints = |v: &[BigInt]| json!(v.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    let mut cx = Ctx {
        checks: 0,
        inputs: || {
            json!({ "a": bi_json(&a), "b": bi_json(&b), "c": bi_json(&c), "shift": vec_json(&shift), "mu": ints(&mu), "nu": ints(&nu) })
        },
    };
    let res = (|| {
        let ab = cx.ok("cocycle", g.cocycle(&a, &b))?;
        let ab_c = cx.ok("cocycle", g.cocycle(&g.add(&a, &b), &c))?;
        let a_bc = cx.ok("cocycle", g.cocycle(&a, &g.add(&b, &c)))?;
        let bc = cx.ok("cocycle", g.cocycle(&b, &c))?;
        cx.eq("cocycle relation", ab.clone() + ab_c, a_bc + bc)?;
        cx.eq("normalization c(a,1)", Angle::zero(), cx.ok("cocycle", g.cocycle(&a, &g.identity()))?)?;
        cx.eq("normalization c(1,a)", Angle::zero(), cx.ok("cocycle", g.cocycle(&g.identity(), &a))?)?;
        let moved = cx.ok("lift", g.make_loop(a.lift().add_const(&shift), vadd(a.mq(), &shift)))?;
        cx.holds("shifted lift is the same loop", g.loops_equal(&moved, &a))?;
        cx.eq("lift independence", ab.clone(), cx.ok("cocycle", g.cocycle(&moved, &b))?)?;
        cx.eq("lift independence", cx.ok("cocycle", g.cocycle(&b, &a))?, cx.ok("cocycle", g.cocycle(&b, &moved))?)?;
        cx.eq("decomposition independence", ab, g.cocycle_bicoloured_fashion(&a, &b, &mu, &nu))?;
        let (x, y, z) = (
            ExtensionElement::new(a.clone(), pa.clone()),
            ExtensionElement::new(b.clone(), pb.clone()),
            ExtensionElement::new(c.clone(), pc.clone()),
        );
        let left = cx.ok("multiply", g.multiply(&cx.ok("multiply", g.multiply(&x, &y))?, &z))?;
        let right = cx.ok("multiply", g.multiply(&x, &cx.ok("multiply", g.multiply(&y, &z))?))?;
        cx.holds("associativity", g.elements_equal(&left, &right))?;
        let inv = cx.ok("multiply", g.multiply(&x, &g.inverse(&x)))?;
        cx.holds("inverse", g.elements_equal(&inv, &g.unit()))
    })();
    *checks += cx.checks;
    res
}

fn uni_disjoint(g: &LoopGroup, r: &mut ChaCha8Rng, graded: bool, checks: &mut u64) -> Check {
    let (i, j) = random::disjoint_arcs(r, false);
    let (a, b) = (random::unicoloured_in_arc(r, g, &i), random::unicoloured_in_arc(r, g, &j));
    let mut cx = Ctx { checks: 0, inputs: || json!({ "a": uni_json(&a), "b": uni_json(&b) }) };
    let res = (|| {
        cx.holds("supports inside the arcs", g.support(&a).within(&i) && g.support(&b).within(&j))?;
        cx.holds("supports separated", g.supports_separated(&a, &b))?;
        let expected = if graded { angle(BigInt::from(g.parity(&a) * g.parity(&b)), 2) } else { Angle::zero() };
        cx.eq(if graded { "graded commutator" } else { "disjoint commutator" }, expected, cx.ok("commutator", g.commutator(&a, &b))?)
    })();
    *checks += cx.checks;
    res
}

fn bi_disjoint(g: &BicolouredGroup, r: &mut ChaCha8Rng, around_points: bool, checks: &mut u64) -> Check {
    let (i, j) = if around_points {
        (Arc::new(rat(5, 12), rat(7, 12)), Arc::new(rat(5, 6), rat(1, 6)))
    } else {
        random::disjoint_arcs(r, true)
    };
    let (a, b) = (random::bicoloured_in_arc(r, g, &i), random::bicoloured_in_arc(r, g, &j));
    let mut cx = Ctx { checks: 0, inputs: || json!({ "a": bi_json(&a), "b": bi_json(&b) }) };
    let res = (|| {
        cx.holds("supports inside the arcs", g.support(&a).within(&i) && g.support(&b).within(&j))?;
        cx.holds("supports separated", g.supports_separated(&a, &b))?;
        cx.eq("disjoint commutator", Angle::zero(), cx.ok("commutator", g.commutator(&a, &b))?)
    })();
    *checks += cx.checks;
    res
}

fn uni_diffaction(g: &LoopGroup, r: &mut ChaCha8Rng, checks: &mut u64) -> Check {
    let (a, b) = (random::unicoloured(r, g), random::unicoloured(r, g));
    let (phi, psi) = (random::reparam(r, 1), random::reparam(r, 1));
    let x = random::vector(r, g.rank(), 2);
    let (i, j) = random::disjoint_arcs(r, false);
    let local = random::reparam_in_arc(r, &i, 1);
    let c = random::unicoloured_in_arc(r, g, &j);
    let mut cx = Ctx {
        checks: 0,
        inputs: || {
            json!({ "a": uni_json(&a), "b": uni_json(&b), "phi": reparam_json(&phi), "psi": reparam_json(&psi),
                    "local": reparam_json(&local), "c": uni_json(&c), "x": vec_json(&x) })
        },
    };
    let res = (|| {
        let comp = cx.ok("compose", psi.compose(&phi))?;
        let pa = g.reparam_loop(&phi, &a);
        cx.eq("d cochain law", g.reparam_d(&psi, &pa) + g.reparam_d(&phi, &a), g.reparam_d(&comp, &a))?;
        cx.holds("reparametrization is an action", g.loops_equal(&g.reparam_loop(&comp, &a), &g.reparam_loop(&psi, &pa)))?;
        let lhs = g.reparam_d(&phi, &g.add(&a, &b)) + cx.ok("cocycle", g.cocycle(&a, &b))?;
        let rhs = g.reparam_d(&phi, &a)
            + g.reparam_d(&phi, &b)
            + cx.ok("cocycle", g.cocycle(&pa, &g.reparam_loop(&phi, &b)))?;
        cx.eq("d transforms c", rhs, lhs)?;
        cx.eq("d vanishes on constants", Angle::zero(), g.reparam_d(&phi, &g.constant(x.clone())))?;
        cx.eq("local triviality", (true, Angle::zero()), cx.ok("local triviality", g.local_triviality(&local, &c))?)
    })();
    *checks += cx.checks;
    res
}

fn bi_diffaction(g: &BicolouredGroup, r: &mut ChaCha8Rng, checks: &mut u64) -> Check {
    let level = u64::try_from(g.derived().level().clone()).expect("small level");
    let n = level * r.gen_range(1..=2);
    let (a, b) = (random::bicoloured(r, g), random::bicoloured(r, g));
    let (phi, psi) = (random::reparam(r, n), random::reparam(r, n));
    let mut cx = Ctx {
        checks: 0,
        inputs: || json!({ "a": bi_json(&a), "b": bi_json(&b), "phi": reparam_json(&phi), "psi": reparam_json(&psi) }),
    };
    let res = (|| {
        let comp = cx.ok("compose", psi.compose(&phi))?;
        let pa = cx.ok("reparametrize", g.reparam_loop(&phi, &a))?;
        let pb = cx.ok("reparametrize", g.reparam_loop(&phi, &b))?;
        let d = |p: &PLReparam, l: &BicolouredLoop| g.reparam_d(p, l);
        cx.eq("d cochain law", cx.ok("d", d(&psi, &pa))? + cx.ok("d", d(&phi, &a))?, cx.ok("d", d(&comp, &a))?)?;
        let moved = cx.ok("reparametrize", g.reparam_loop(&psi, &pa))?;
        cx.holds("reparametrization is an action", g.loops_equal(&cx.ok("reparametrize", g.reparam_loop(&comp, &a))?, &moved))?;
        let lhs = cx.ok("d", d(&phi, &g.add(&a, &b)))? + cx.ok("cocycle", g.cocycle(&a, &b))?;
        let rhs = cx.ok("d", d(&phi, &a))? + cx.ok("d", d(&phi, &b))? + cx.ok("cocycle", g.cocycle(&pa, &pb))?;
        cx.eq("d transforms c", rhs, lhs)?;
        let el = ExtensionElement::new(a.clone(), Angle::zero());
        let x = cx.ok("act", g.act_reparam(&phi, &el))?;
        let y = cx.ok("act", g.act_reparam(&phi.translated(n as i64), &el))?;
        cx.holds("deck translation acts trivially", g.elements_equal(&x, &y))
    })();
    *checks += cx.checks;
    res
}

fn uni_autaction(g: &LoopGroup, m: &IntMatrix, r: &mut ChaCha8Rng, checks: &mut u64) -> Check {
    let x = random_element(r, |r| random::unicoloured(r, g));
    let y = random_element(r, |r| random::unicoloured(r, g));
    let (l, k) = (random::int_vector(r, g.rank(), 3), random::int_vector(r, g.rank(), 3));
    let phi = random::reparam(r, 1);
    let mut cx = Ctx {
        checks: 0,
        inputs: || {
            json!({ "g": m.to_rows().iter().map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "a": uni_json(&x.base), "aPhase": rat_json(x.phase.value()),
                    "b": uni_json(&y.base), "bPhase": rat_json(y.phase.value()), "phi": reparam_json(&phi) })
        },
    };
    let res = (|| {
        let cob = cx.ok("coboundary", g.solve_coboundary(m))?;
        cx.eq("de = r", cob.ratio(&l, &k), cob.delta_e(&l, &k))?;
        let lhs = g.aut_action(&cob, &cx.ok("multiply", g.multiply(&x, &y))?);
        let rhs = cx.ok("multiply", g.multiply(&g.aut_action(&cob, &x), &g.aut_action(&cob, &y)))?;
        cx.holds("action is a homomorphism", g.elements_equal(&lhs, &rhs))?;
        let a = g.act_reparam(&phi, &g.aut_action(&cob, &x));
        let b = g.aut_action(&cob, &g.act_reparam(&phi, &x));
        cx.holds("action commutes with reparametrization", g.elements_equal(&a, &b))
    })();
    *checks += cx.checks;
    res
}

fn bicoloured(g: &BicolouredGroup, u: &LoopGroup, r: &mut ChaCha8Rng, checks: &mut u64) -> Check {
    let d = g.derived();
    let (a, b) = (random::unicoloured(r, u), random::unicoloured(r, u));
    let phi = random::reparam(r, u64::try_from(d.level().clone()).expect("small level"));
    let white = LoopGroup::with_cocycle(d.span().lattice(Colour::White).clone(), d.restricted_eps(Colour::White));
    let black = LoopGroup::with_cocycle(d.span().lattice(Colour::Black).clone(), d.restricted_eps(Colour::Black));
    let white_arc = Arc::new(rat(13, 24), rat(23, 24));
    let black_arc = Arc::new(rat(1, 24), rat(11, 24));
    let (wa, wb) = (random::unicoloured_in_arc(r, &white, &white_arc), random::unicoloured_in_arc(r, &white, &white_arc));
    let (ba, bb) = (random::unicoloured_in_arc(r, &black, &black_arc), random::unicoloured_in_arc(r, &black, &black_arc));
    let mut cx = Ctx {
        checks: 0,
        inputs: || {
            json!({ "a": uni_json(&a), "b": uni_json(&b), "phi": reparam_json(&phi),
                    "whiteA": uni_json(&wa), "whiteB": uni_json(&wb), "blackA": uni_json(&ba), "blackB": uni_json(&bb) })
        },
    };
    let res = (|| {
        let (ea, eb) = (cx.ok("Bi", g.embed(Embedding::H, &a))?, cx.ok("Bi", g.embed(Embedding::H, &b))?);
        cx.holds("Bi is additive", g.loops_equal(&cx.ok("Bi", g.embed(Embedding::H, &u.add(&a, &b)))?, &g.add(&ea, &eb)))?;
        cx.holds("Pth after Bi", g.pth_equal(g.pth(&ea), a.lift()))?;
        cx.eq("Bi preserves the cocycle", cx.ok("cocycle", u.cocycle(&a, &b))?, cx.ok("cocycle", g.cocycle(&ea, &eb))?)?;
        let moved = cx.ok("reparametrize", g.reparam_loop(&phi, &ea))?;
        cx.holds("Bi is equivariant", g.loops_equal(&moved, &cx.ok("Bi", g.embed(Embedding::H, &u.reparam_loop(&phi, &a)))?))?;
        cx.eq("Bi preserves d", u.reparam_d(&phi, &a), cx.ok("d", g.reparam_d(&phi, &ea))?)?;
        let linear = PLPath::linear(a.lift().delta());
        let k = cx.ok("Bi", g.embed(Embedding::H, &cx.ok("lift", u.make_loop(a.lift().sub(&linear)))?))?;
        let zero = vec![BigInt::from(0); g.rank()];
        cx.eq("Bi of the identity component", g.class_of(&zero, &zero), g.delta_class(&k))?;
        for (grp, which, x, y) in [(&white, Embedding::White, &wa, &wb), (&black, Embedding::Black, &ba, &bb)] {
            let (ex, ey) = (cx.ok("embed", g.embed(which, x))?, cx.ok("embed", g.embed(which, y))?);
            cx.eq("coloured embedding preserves the cocycle", cx.ok("cocycle", grp.cocycle(x, y))?, cx.ok("cocycle", g.cocycle(&ex, &ey))?)?;
            cx.holds("coloured embedding is additive", g.loops_equal(&cx.ok("embed", g.embed(which, &grp.add(x, y)))?, &g.add(&ex, &ey)))?;
        }
        Ok(())
    })();
    *checks += cx.checks;
    res
}

fn pth(g: &BicolouredGroup, r: &mut ChaCha8Rng, checks: &mut u64) -> Check {
    let (w1, b1) = random::class(r, g);
    let (w2, b2) = random::class(r, g);
    let (a, b) = (random::bicoloured(r, g), random::bicoloured(r, g));
    let add = |x: &[BigInt], y: &[BigInt]| -> Vec<BigInt> { x.iter().zip(y).map(|(p, q)| p + q).collect() };
    let ints = |v: &[BigInt]| json!(v.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    let mut cx = Ctx {
        checks: 0,
        inputs: || {
            json!({ "a": bi_json(&a), "b": bi_json(&b), "class1": [ints(&w1), ints(&b1)], "class2": [ints(&w2), ints(&b2)] })
        },
    };
    let res = (|| {
        let sum = g.add(&a, &b);
        cx.holds("Pth is additive", g.pth_equal(g.pth(&sum), &g.pth(&a).add(g.pth(&b))))?;
        let (aw, ab) = g.delta_class(&a);
        let (bw, bb) = g.delta_class(&b);
        cx.eq("Delta is additive", g.class_of(&add(&aw, &bw), &add(&ab, &bb)), g.delta_class(&sum))?;
        cx.eq("Delta' factors through Delta", g.class_to_sum(&aw, &ab), g.delta_prime(&a))?;
        cx.eq("Delta' is additive", vadd(&g.delta_prime(&a), &g.delta_prime(&b)), g.delta_prime(&sum))?;
        let (s1, s2) = (g.standard_loop(&w1, &b1), g.standard_loop(&w2, &b2));
        cx.eq("standard loop is a section", g.class_of(&w1, &b1), g.delta_class(&s1))?;
        cx.eq("Delta' of a standard loop", g.class_to_sum(&w1, &b1), g.delta_prime(&s1))?;
        cx.eq("standard loops add", g.class_of(&add(&w1, &w2), &add(&b1, &b2)), g.delta_class(&g.add(&s1, &s2)))
    })();
    *checks += cx.checks;
    res
}

/// Parameters of `fock check`.
#[derive(Clone, Debug)]
pub struct FockParams {
    pub gram: Gram,
    pub degree: usize,
    pub modes: i64,
    pub samples: u64,
    pub seed: u64,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockOutcome {
    pub samples: u64,
    /// Largest deviation seen per check, in a fixed order.
    pub worst: Vec<(&'static str, f64)>,
    pub energy_dims: bool,
    pub counterexample: Option<Counterexample>,
}

pub const FOCK_CHECKS: [&str; 9] = [
    "jSquared",
    "hermitian",
    "positive",
    "isotropy",
    "skew",
    "coherent",
    "weylUnitarity",
    "heisenberg",
    "rotation",
];

fn fourier_json(xi: &FourierLoop) -> Value {
    let modes: serde_json::Map<String, Value> = xi
        .modes()
        .iter()
        .filter(|(k, _)| **k > 0)
        .map(|(k, v)| (k.to_string(), json!(v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())))
        .collect();
    Value::Object(modes)
}

fn positive_part(xi: &FourierLoop) -> BTreeMap<i64, Vec<C>> {
    xi.modes().iter().filter(|(k, _)| **k > 0).map(|(k, v)| (*k, v.clone())).collect()
}

fn combo_inner(v: &Coherents, p: &FourierLoop, gram: &Gram) -> C {
    v.terms.iter().map(|(a, k)| a * inner_j(k, p, gram).exp()).sum()
}

/// Seeded numerical checks of the J-geometry, coherent vectors and the Weyl representation.
pub fn fock_check(p: &FockParams) -> FockOutcome {
    let g = &p.gram;
    let one = C::new(1.0, 0.0);
    let mut worst: BTreeMap<&'static str, f64> = FOCK_CHECKS.iter().map(|c| (*c, 0.0)).collect();
    let d = g.dim();
    let order = p.degree.min(10);
    let eta: Vec<u64> = eta_inverse_power(d as u32, order as u64).coeffs().iter().map(|x| x.to_u64().unwrap_or(u64::MAX)).collect();
    let dims = energy_dims(d, order);
    let dims_ok = dims == eta;
    let mut counterexample = None;
    let mut done = 0;
    'samples: for i in 0..p.samples {
        done = i + 1;
        let mut r = sample_rng(p.seed, i);
        let mut norm = || r.gen_range(0.05..=1.0);
        let norms = [norm(), norm(), norm(), norm()];
        let phase = C::from_polar(1.0, r.gen_range(0.0..std::f64::consts::TAU));
        let t = r.gen_range(0.0..1.0);
        let [xi, eta, k1, k2] = norms.map(|n| random_loop(&mut r, g, p.modes, n));
        let inputs = || {
            json!({ "xi": fourier_json(&xi), "eta": fourier_json(&eta), "kappa1": fourier_json(&k1),
                    "kappa2": fourier_json(&k2), "z": [phase.re, phase.im], "t": t })
        };
        let mut devs: Vec<(&'static str, f64, f64)> = Vec::new();
        devs.push(("jSquared", xi.apply_j().apply_j().distance(&xi.neg()), p.tol));
        devs.push(("hermitian", (inner_j(&xi, &eta, g) - inner_j(&eta, &xi, g).conj()).norm(), p.tol));
        let n = inner_j(&xi, &xi, g);
        devs.push(("positive", if n.re > 0.0 { n.im.abs() } else { f64::INFINITY }, p.tol));
        devs.push(("isotropy", s_form(g, &positive_part(&xi), &positive_part(&eta)).norm(), p.tol));
        devs.push(("skew", (fourier_s(&xi, &eta, g) + fourier_s(&eta, &xi, g)).norm(), p.tol));

        let basis = ProbeBasis::new(g.clone(), &[xi.clone(), eta.clone()]);
        let (cx, ce) = (basis.coords(&xi), basis.coords(&eta));
        let truncated = fock_inner(&coherent(&cx, p.degree), &coherent(&ce, p.degree)).expect("same basis");
        let ij = inner_j(&xi, &eta, g);
        devs.push(("coherent", (truncated - ij.exp()).norm(), p.tol + tail_bound(ij.norm(), p.degree)));

        let basis = ProbeBasis::new(g.clone(), &[xi.clone(), k1.clone(), k2.clone()]);
        let probes = [Coherents::single(k1.clone()), Coherents::single(k2.clone())];
        let moved: Vec<Coherents> = probes.iter().map(|v| weyl_apply(&xi, phase, v, g)).collect();
        let before: Vec<FockVector> = probes.iter().map(|v| v.to_fock(&basis, p.degree)).collect();
        let after: Vec<FockVector> = moved.iter().map(|v| v.to_fock(&basis, p.degree)).collect();
        let (mut dev, mut bound) = (0.0f64, 0.0f64);
        for a in 0..2 {
            for b in 0..2 {
                let x = fock_inner(&before[a], &before[b]).expect("same basis");
                let y = fock_inner(&after[a], &after[b]).expect("same basis");
                let (ka, kb) = (&moved[a].terms[0], &moved[b].terms[0]);
                let tail = (ka.0 * kb.0.conj()).norm() * tail_bound(inner_j(&ka.1, &kb.1, g).norm(), p.degree)
                    + tail_bound(inner_j(&probes[a].terms[0].1, &probes[b].terms[0].1, g).norm(), p.degree);
                dev = dev.max((x - y).norm());
                bound = bound.max(tail);
            }
        }
        devs.push(("weylUnitarity", dev, p.tol + bound));

        let start = Coherents::single(k1.clone());
        let two = weyl_apply(&xi, one, &weyl_apply(&eta, one, &start, g), g);
        let (sum, z) = heisenberg_multiply(&(xi.clone(), one), &(eta.clone(), one), g);
        let single = weyl_apply(&sum, z, &start, g);
        let basis = ProbeBasis::new(g.clone(), &[xi.clone(), eta.clone(), k1.clone(), k2.clone()]);
        let probe = coherent(&basis.coords(&k2), p.degree);
        let a = fock_inner(&two.to_fock(&basis, p.degree), &probe).expect("same basis");
        let b = fock_inner(&single.to_fock(&basis, p.degree), &probe).expect("same basis");
        devs.push(("heisenberg", (a - b).norm(), p.tol));

        let lhs = weyl_apply(&xi, phase, &Coherents::single(k1.rotate(-t)), g).rotate(t);
        let rhs = weyl_apply(&xi.rotate(t), phase, &Coherents::single(k1.clone()), g);
        let dev = [&k1, &k2, &xi]
            .iter()
            .map(|q| (combo_inner(&lhs, q, g) - combo_inner(&rhs, q, g)).norm())
            .fold(0.0, f64::max);
        devs.push(("rotation", dev, p.tol));

        for (check, dev, allowed) in devs {
            let w = worst.get_mut(check).expect("known check");
            *w = w.max(dev);
            if !(dev <= allowed) && counterexample.is_none() {
                counterexample = Some(Counterexample {
                    seed: p.seed,
                    sample: i,
                    check,
                    inputs: inputs(),
                    expected: json!(format!("deviation <= {allowed:e}")),
                    actual: json!(dev),
                });
            }
        }
        if counterexample.is_some() {
            break 'samples;
        }
    }
    if !dims_ok && counterexample.is_none() {
        counterexample = Some(Counterexample {
            seed: p.seed,
            sample: 0,
            check: "energyDims",
            inputs: json!({ "dim": d, "order": order }),
            expected: json!(eta),
            actual: json!(dims),
        });
    }
    FockOutcome {
        samples: done,
        worst: FOCK_CHECKS.iter().map(|c| (*c, worst[c])).collect(),
        energy_dims: dims_ok,
        counterexample,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use torusloop::lattice::parse_builtin;
    use torusloop::span::builtin_span;

    fn lat(n: &str) -> Target {
        Target::Lattice(parse_builtin(n).unwrap())
    }

    fn span(n: &str) -> Target {
        Target::Span(builtin_span(n).unwrap())
    }

    #[test]
    fn every_suite_passes_on_small_inputs() {
        for s in [Suite::Cocycle, Suite::Commutator, Suite::Disjoint, Suite::Graded, Suite::Diffaction, Suite::Autaction] {
            let o = run(s, &lat("A2"), 20, 3, None).unwrap();
            assert!(o.counterexample.is_none(), "{s:?}: {:?}", o.counterexample);
        }
        for s in [Suite::Cocycle, Suite::Commutator, Suite::Disjoint, Suite::Diffaction, Suite::Bicoloured, Suite::Pth] {
            let o = run(s, &span("rank1-72"), 20, 3, None).unwrap();
            assert!(o.counterexample.is_none(), "{s:?}: {:?}", o.counterexample);
        }
        let o = run(Suite::Graded, &lat("Z1"), 50, 3, None).unwrap();
        assert!(o.counterexample.is_none());
    }

    #[test]
    fn suites_reject_wrong_targets() {
        assert_eq!(run(Suite::Pth, &lat("A1"), 1, 0, None), Err(HarnessError::NeedsSpan("pth")));
        assert_eq!(run(Suite::Graded, &span("d8pair"), 1, 0, None), Err(HarnessError::NeedsLattice("graded")));
        assert_eq!(run(Suite::Disjoint, &lat("Z2"), 1, 0, None), Err(HarnessError::NeedsEven("disjoint")));
    }

    #[test]
    fn automorphisms_are_isometries() {
        for n in ["A1", "A2", "D4", "E8", "Z2"] {
            let l = parse_builtin(n).unwrap();
            for m in automorphisms(&l) {
                assert_eq!(m.transpose().mul(l.gram()).mul(&m), *l.gram(), "{n}");
            }
        }
    }

    #[test]
    fn given_loops_run_every_triple() {
        let loops = vec![
            json!({"breakpoints": ["0", "1/2", "1"], "values": [["0"], ["1/3"], ["1"]]}),
            json!({"breakpoints": ["0", "1"], "values": [["1/2"], ["1/2"]]}),
        ];
        let o = run(Suite::Cocycle, &lat("A1"), 0, 0, Some(&loops)).unwrap();
        assert_eq!(o.samples, 8);
        assert!(o.counterexample.is_none());
        let bad = vec![json!({"breakpoints": ["0", "1"], "values": [["0"], ["1/2"]]})];
        assert!(matches!(run(Suite::Cocycle, &lat("A1"), 0, 0, Some(&bad)), Err(HarnessError::BadLoop { index: 0, .. })));
    }

    #[test]
    fn counterexamples_carry_inputs() {
        // a wrong expectation must surface with seed, sample and inputs
        let g = LoopGroup::new(parse_builtin("A1").unwrap());
        let a = g.gamma_lambda(&[BigInt::from(1)]);
        let mut cx = Ctx { checks: 0, inputs: || json!({ "a": uni_json(&a) }) };
        let f = cx.eq("demo", Angle::half(), Angle::zero()).unwrap_err();
        assert_eq!(f.expected, json!("1/2"));
        assert_eq!(f.inputs["a"]["values"][1], json!(["1/1"]));
    }

    #[test]
    fn fock_checks_pass_at_the_default_truncation() {
        let p = FockParams { gram: Gram::identity(2), degree: 20, modes: 3, samples: 5, seed: 1, tol: 1e-8 };
        let o = fock_check(&p);
        assert!(o.counterexample.is_none(), "{:?}", o.counterexample);
        assert!(o.energy_dims);
        assert_eq!(o, fock_check(&p));
        // a low truncation stays inside its tail bounds but is far from 1e-8
        let low = fock_check(&FockParams { degree: 2, ..p });
        assert!(low.counterexample.is_none(), "{:?}", low.counterexample);
        assert!(low.worst.iter().any(|(c, w)| *c == "coherent" && *w > 1e-4));
    }

    #[test]
    fn runs_are_deterministic() {
        let a = run(Suite::Cocycle, &span("d8pair"), 5, 9, None).unwrap();
        let b = run(Suite::Cocycle, &span("d8pair"), 5, 9, None).unwrap();
        assert_eq!(a, b);
    }
}
