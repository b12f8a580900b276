//! Deterministic instance builders.
//!
//! * `f1`/`f2`: finite truncations of two infinite example multifunctions
//!   with a point `x0` reached by many 2-paths.
//! * `fig67-f`/`fig67-g`: a 20-point map with four non-isolated fixed points
//!   and a fourth iterative root of it.
//! * `cyclic-power`: `x ↦ e·x` or `x ↦ x + e` modulo `q`.
//! * `random-mf`/`random-map`: seeded generators (ChaCha8).
//!
//! The truncations close the infinite forward chain into the tail of a
//! backward chain rather than back into `x0`, so that `x0` keeps exactly its
//! intended predecessors and every other point keeps in-degree at most one.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mf::{GroundSet, Multifunction, SingleMap};
use crate::{Error, PointSet, Result};

pub const DEFAULT_DEPTH: usize = 3;
pub const MAX_RANDOM_SIZE: usize = 64;
pub const MAX_DEPTH: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceName {
    F1,
    F2,
    Fig67F,
    Fig67G,
    CyclicPower,
    RandomMf,
    RandomMap,
}

impl InstanceName {
    pub const ALL: [InstanceName; 7] = [
        InstanceName::F1,
        InstanceName::F2,
        InstanceName::Fig67F,
        InstanceName::Fig67G,
        InstanceName::CyclicPower,
        InstanceName::RandomMf,
        InstanceName::RandomMap,
    ];

    pub fn id(self) -> &'static str {
        match self {
            InstanceName::F1 => "f1",
            InstanceName::F2 => "f2",
            InstanceName::Fig67F => "fig67-f",
            InstanceName::Fig67G => "fig67-g",
            InstanceName::CyclicPower => "cyclic-power",
            InstanceName::RandomMf => "random-mf",
            InstanceName::RandomMap => "random-map",
        }
    }
}

impl FromStr for InstanceName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InstanceName::ALL
            .into_iter()
            .find(|n| n.id() == s)
            .ok_or_else(|| Error::InvalidInstance(format!("unknown instance name `{s}`")))
    }
}

impl fmt::Display for InstanceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CyclicVariant {
    #[default]
    Multiply,
    Add,
}

impl FromStr for CyclicVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mul" => Ok(CyclicVariant::Multiply),
            "add" => Ok(CyclicVariant::Add),
            _ => Err(Error::InvalidInstance(format!("unknown cyclic variant `{s}` (expected mul or add)"))),
        }
    }
}

/// Parameters for [`build`]. Unused fields are ignored by instances that do
/// not need them.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub name: InstanceName,
    pub depth: Option<usize>,
    pub modulus: Option<usize>,
    pub exponent: Option<usize>,
    pub variant: CyclicVariant,
    pub size: Option<usize>,
    pub max_out_degree: Option<usize>,
    pub density: Option<f64>,
    pub seed: Option<u64>,
}

impl InstanceSpec {
    pub fn new(name: InstanceName) -> Self {
        InstanceSpec {
            name,
            depth: None,
            modulus: None,
            exponent: None,
            variant: CyclicVariant::default(),
            size: None,
            max_out_degree: None,
            density: None,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Multi(Multifunction),
    Map(SingleMap),
}

pub fn build(spec: &InstanceSpec) -> Result<Instance> {
    let depth = spec.depth.unwrap_or(DEFAULT_DEPTH);
    let size = spec.size.unwrap_or(5);
    let seed = spec.seed.unwrap_or(0);
    Ok(match spec.name {
        InstanceName::F1 => Instance::Multi(f1(depth)?),
        InstanceName::F2 => Instance::Multi(f2(depth)?),
        InstanceName::Fig67F => Instance::Map(fig67().0),
        InstanceName::Fig67G => Instance::Map(fig67().1),
        InstanceName::CyclicPower => {
            let q = spec.modulus.ok_or_else(|| Error::InvalidInstance("cyclic-power needs a modulus".into()))?;
            let e = spec.exponent.ok_or_else(|| Error::InvalidInstance("cyclic-power needs an exponent".into()))?;
            Instance::Map(cyclic_power(q, e, spec.variant)?)
        }
        InstanceName::RandomMf => Instance::Multi(random_multifunction(
            size,
            spec.max_out_degree.unwrap_or(size),
            spec.density.unwrap_or(0.3),
            seed,
        )?),
        InstanceName::RandomMap => Instance::Map(random_map(size, seed)?),
    })
}

fn labelled(labels: Vec<String>) -> Arc<GroundSet> {
    Arc::new(GroundSet::new(labels).expect("generated labels are distinct"))
}

fn check_depth(depth: usize, min: usize, name: &str) -> Result<()> {
    if depth < min || depth > MAX_DEPTH {
        return Err(Error::InvalidInstance(format!("{name} needs {min} <= depth <= {MAX_DEPTH}, got {depth}")));
    }
    Ok(())
}

/// Truncation of the first example at depth `D ≥ 3`.
///
/// Points: the forward chain `x0 → x1 → … → xD`, four points `x-1.j ↦ {x0}`,
/// `x-2.1 ↦ {x-1.1, x-1.2}`, `x-2.2 ↦ {x-1.3, x-1.4}` and backward chains
/// `x-i.j ↦ {x-(i-1).j}` for `3 ≤ i ≤ D`. The chain end closes with
/// `xD ↦ {x-D.1}`.
pub fn f1(depth: usize) -> Result<Multifunction> {
    check_depth(depth, 3, "f1")?;
    let mut labels: Vec<String> = (0..=depth).map(|i| format!("x{i}")).collect();
    labels.extend((1..=4).map(|j| format!("x-1.{j}")));
    for i in 2..=depth {
        labels.extend((1..=2).map(|j| format!("x-{i}.{j}")));
    }
    let ground = labelled(labels);
    let at = |l: String| ground.index_of(&l).expect("label exists");
    let mut images = vec![PointSet::new(); ground.size()];
    for i in 0..depth {
        images[at(format!("x{i}"))].insert(at(format!("x{}", i + 1)));
    }
    images[at(format!("x{depth}"))].insert(at(format!("x-{depth}.1")));
    for j in 1..=4 {
        images[at(format!("x-1.{j}"))].insert(at("x0".into()));
    }
    for j in 1..=2 {
        let img = &mut images[at(format!("x-2.{j}"))];
        img.insert(at(format!("x-1.{}", 2 * j - 1)));
        img.insert(at(format!("x-1.{}", 2 * j)));
    }
    for i in 3..=depth {
        for j in 1..=2 {
            images[at(format!("x-{i}.{j}"))].insert(at(format!("x-{}.{j}", i - 1)));
        }
    }
    Multifunction::new(ground, images)
}

/// Truncation of the second example at depth `D ≥ 2`.
///
/// `x0 ↦ {x1.1, x1.2}`, forward chains `xi.j ↦ {x(i+1).j}`, three points
/// `x-1.j ↦ {x0}` and backward chains `x-i.j ↦ {x-(i-1).j}`. The forward
/// chains close onto the three backward tails, `xD.1 ↦ {x-D.1, x-D.2}` and
/// `xD.2 ↦ {x-D.3}`, so the result is total, onto and has images of at most
/// two points.
pub fn f2(depth: usize) -> Result<Multifunction> {
    check_depth(depth, 2, "f2")?;
    let mut labels = vec!["x0".to_string()];
    for i in 1..=depth {
        labels.extend((1..=2).map(|j| format!("x{i}.{j}")));
    }
    for i in 1..=depth {
        labels.extend((1..=3).map(|j| format!("x-{i}.{j}")));
    }
    let ground = labelled(labels);
    let at = |l: String| ground.index_of(&l).expect("label exists");
    let mut images = vec![PointSet::new(); ground.size()];
    images[at("x0".into())] = [at("x1.1".into()), at("x1.2".into())].into_iter().collect();
    for i in 1..depth {
        for j in 1..=2 {
            images[at(format!("x{i}.{j}"))].insert(at(format!("x{}.{j}", i + 1)));
        }
    }
    images[at(format!("x{depth}.1"))] = [at(format!("x-{depth}.1")), at(format!("x-{depth}.2"))].into_iter().collect();
    images[at(format!("x{depth}.2"))].insert(at(format!("x-{depth}.3")));
    for j in 1..=3 {
        images[at(format!("x-1.{j}"))].insert(at("x0".into()));
    }
    for i in 2..=depth {
        for j in 1..=3 {
            images[at(format!("x-{i}.{j}"))].insert(at(format!("x-{}.{j}", i - 1)));
        }
    }
    Multifunction::new(ground, images)
}

/// The 20-point pair `(f, g)` with `g^4 = f`.
///
/// Points `xj`, `yj.i`, `zj.i` for `j = 1..4`, `i = 1, 2`. `f` fixes each
/// `xj`, sends `yj.i` to `xj` and `zj.i` to `yj.i`. `g` rotates the `x`s and
/// shifts each `y`/`z` strand one step up, wrapping `y4.i` to `x1` and `z4.i`
/// to `y1.i`.
pub fn fig67() -> (SingleMap, SingleMap) {
    let mut labels: Vec<String> = (1..=4).map(|j| format!("x{j}")).collect();
    for letter in ["y", "z"] {
        for j in 1..=4 {
            labels.extend((1..=2).map(|i| format!("{letter}{j}.{i}")));
        }
    }
    let ground = labelled(labels);
    let at = |l: String| ground.index_of(&l).expect("label exists");
    let mut f = vec![0; ground.size()];
    let mut g = vec![0; ground.size()];
    for j in 1..=4 {
        let x = at(format!("x{j}"));
        f[x] = x;
        g[x] = at(format!("x{}", j % 4 + 1));
        for i in 1..=2 {
            let y = at(format!("y{j}.{i}"));
            let z = at(format!("z{j}.{i}"));
            f[y] = x;
            f[z] = y;
            if j < 4 {
                g[y] = at(format!("y{}.{i}", j + 1));
                g[z] = at(format!("z{}.{i}", j + 1));
            } else {
                g[y] = at("x1".into());
                g[z] = at(format!("y1.{i}"));
            }
        }
    }
    (
        SingleMap::new(ground.clone(), f).expect("valid"),
        SingleMap::new(ground, g).expect("valid"),
    )
}

/// `x ↦ e·x mod q` or `x ↦ x + e mod q` on points labelled `0..q`.
pub fn cyclic_power(modulus: usize, exponent: usize, variant: CyclicVariant) -> Result<SingleMap> {
    if modulus == 0 || modulus > 1 << 16 {
        return Err(Error::InvalidInstance(format!("modulus must be in 1..=65536, got {modulus}")));
    }
    let image = (0..modulus)
        .map(|x| match variant {
            CyclicVariant::Multiply => (exponent % modulus) * x % modulus,
            CyclicVariant::Add => (x + exponent) % modulus,
        })
        .collect();
    SingleMap::from_vec(image)
}

fn check_random_size(size: usize) -> Result<()> {
    if size == 0 || size > MAX_RANDOM_SIZE {
        return Err(Error::InvalidInstance(format!("size must be in 1..={MAX_RANDOM_SIZE}, got {size}")));
    }
    Ok(())
}

/// Each edge is kept independently with probability `density`; points that
/// draw more than `max_out_degree` targets keep a uniformly chosen subset of
/// that size.
pub fn random_multifunction(size: usize, max_out_degree: usize, density: f64, seed: u64) -> Result<Multifunction> {
    check_random_size(size)?;
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidInstance(format!("density must be in [0, 1], got {density}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let images = (0..size)
        .map(|_| {
            let mut targets: Vec<usize> = (0..size).filter(|_| rng.gen_bool(density)).collect();
            if targets.len() > max_out_degree {
                targets.shuffle(&mut rng);
                targets.truncate(max_out_degree);
            }
            targets.into_iter().collect()
        })
        .collect();
    Multifunction::new(Arc::new(GroundSet::numbered(size)?), images)
}

/// Uniform over all `size^size` maps.
pub fn random_map(size: usize, seed: u64) -> Result<SingleMap> {
    check_random_size(size)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SingleMap::from_vec((0..size).map(|_| rng.gen_range(0..size)).collect())
}

/// Uniform over permutations, the surjective maps of a finite set.
pub fn random_permutation(size: usize, seed: u64) -> Result<SingleMap> {
    check_random_size(size)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut image: Vec<usize> = (0..size).collect();
    image.shuffle(&mut rng);
    SingleMap::from_vec(image)
}
