//! Ground sets, multifunctions and single-valued maps.
//!
//! Points are dense indices `0..size` into a [`GroundSet`] label table. A
//! [`Multifunction`] stores one [`PointSet`] image per point; a [`SingleMap`]
//! stores exactly one image index per point. All values are immutable once
//! built and every operation returns a fresh value.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::{Error, PointSet, Result};

/// An ordered, finite, nonempty set of distinctly labelled points.
#[derive(Clone)]
pub struct GroundSet {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyGround);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if !is_valid_label(label) {
                return Err(Error::InvalidLabel(label.clone()));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(GroundSet { labels, index })
    }

    /// Points labelled `0`, `1`, ..., `size - 1`.
    pub fn numbered(size: usize) -> Result<Self> {
        Self::new((0..size).map(|i| i.to_string()))
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn all(&self) -> PointSet {
        PointSet::full(self.size())
    }

    pub(crate) fn check_point(&self, x: usize) -> Result<()> {
        if x < self.size() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: x, size: self.size() })
        }
    }

    pub(crate) fn check_set(&self, a: &PointSet) -> Result<()> {
        if a.bound() <= self.size() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: a.bound() - 1, size: self.size() })
        }
    }
}

/// Labels are whitespace-free tokens that cannot be confused with the
/// `.mfn` syntax or the CLI's comma-separated label lists.
fn is_valid_label(label: &str) -> bool {
    !label.is_empty()
        && label != "->"
        && !label.chars().any(|c| c.is_whitespace() || c == '#' || c == ',')
}

impl PartialEq for GroundSet {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for GroundSet {}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("GroundSet").field(&self.labels).finish()
    }
}

fn same_ground(a: &Arc<GroundSet>, b: &Arc<GroundSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A map from a finite ground set into its power set.
#[derive(Clone, PartialEq, Eq)]
pub struct Multifunction {
    ground: Arc<GroundSet>,
    images: Vec<PointSet>,
}

impl Multifunction {
    pub fn new(ground: Arc<GroundSet>, images: Vec<PointSet>) -> Result<Self> {
        if images.len() != ground.size() {
            return Err(Error::IndexOutOfRange { index: images.len(), size: ground.size() });
        }
        for image in &images {
            ground.check_set(image)?;
        }
        Ok(Multifunction { ground, images })
    }

    /// Builds a multifunction from per-point image index lists.
    pub fn from_lists(ground: Arc<GroundSet>, lists: &[Vec<usize>]) -> Result<Self> {
        let images = lists.iter().map(|l| l.iter().copied().collect()).collect();
        Self::new(ground, images)
    }

    /// Builds a multifunction on a fresh numbered ground set from bit masks.
    pub fn from_masks(masks: &[u64]) -> Result<Self> {
        let ground = Arc::new(GroundSet::numbered(masks.len())?);
        Self::new(ground, masks.iter().map(|&m| PointSet::from_mask(m)).collect())
    }

    pub fn identity(ground: Arc<GroundSet>) -> Self {
        let images = (0..ground.size()).map(PointSet::singleton).collect();
        Multifunction { ground, images }
    }

    pub fn empty(ground: Arc<GroundSet>) -> Self {
        let images = vec![PointSet::new(); ground.size()];
        Multifunction { ground, images }
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn size(&self) -> usize {
        self.ground.size()
    }

    pub fn image_of(&self, x: usize) -> &PointSet {
        &self.images[x]
    }

    pub fn images(&self) -> &[PointSet] {
        &self.images
    }

    /// Images as bit masks; only meaningful for ground sets of at most 64 points.
    pub fn masks(&self) -> Vec<u64> {
        self.images.iter().map(PointSet::to_mask).collect()
    }

    /// Edges `(x, y)` with `y ∈ F(x)`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.images
            .iter()
            .enumerate()
            .flat_map(|(x, img)| img.iter().map(move |y| (x, y)))
    }

    pub fn edge_count(&self) -> usize {
        self.images.iter().map(PointSet::len).sum()
    }

    /// `F(A)`, the union of the images of the points of `A`.
    pub fn image(&self, a: &PointSet) -> Result<PointSet> {
        self.ground.check_set(a)?;
        Ok(self.image_unchecked(a))
    }

    fn image_unchecked(&self, a: &PointSet) -> PointSet {
        let mut out = PointSet::new();
        for x in a.iter() {
            out.union_with(&self.images[x]);
        }
        out
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &Multifunction) -> Result<Multifunction> {
        if !same_ground(&self.ground, &inner.ground) {
            return Err(Error::GroundMismatch);
        }
        let images = inner.images.iter().map(|a| self.image_unchecked(a)).collect();
        Ok(Multifunction { ground: self.ground.clone(), images })
    }

    /// `F^n`, with `F^0` the identity.
    pub fn iterate(&self, n: u64) -> Multifunction {
        let mut acc = Multifunction::identity(self.ground.clone());
        for _ in 0..n {
            acc = self.compose(&acc).expect("same ground");
        }
        acc
    }

    /// `F^{-k}(A) = {x : F^k(x) ∩ A ≠ ∅}`.
    pub fn inverse_image(&self, a: &PointSet, k: u64) -> Result<PointSet> {
        if k == 0 {
            return Err(Error::ZeroCount("inverse image order"));
        }
        self.ground.check_set(a)?;
        let power = self.iterate(k);
        Ok(power
            .images
            .iter()
            .enumerate()
            .filter(|(_, img)| img.intersects(a))
            .map(|(x, _)| x)
            .collect())
    }

    /// The inverse multifunction: `x ∈ F^{-1}(y)` iff `y ∈ F(x)`.
    pub fn invert(&self) -> Multifunction {
        let mut images = vec![PointSet::new(); self.size()];
        for (x, y) in self.edges() {
            images[y].insert(x);
        }
        Multifunction { ground: self.ground.clone(), images }
    }

    /// Points with a nonempty image.
    pub fn domain(&self) -> PointSet {
        self.images
            .iter()
            .enumerate()
            .filter(|(_, img)| !img.is_empty())
            .map(|(x, _)| x)
            .collect()
    }

    /// Union of all images.
    pub fn range(&self) -> PointSet {
        self.image_unchecked(&self.ground.all())
    }

    pub fn is_total(&self) -> bool {
        self.images.iter().all(|img| !img.is_empty())
    }

    pub fn is_onto(&self) -> bool {
        self.range().len() == self.size()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.images.iter().map(PointSet::len).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.size()];
        for (_, y) in self.edges() {
            deg[y] += 1;
        }
        deg
    }

    pub fn profile(&self) -> StructuralProfile {
        let out = self.out_degrees();
        let inn = self.in_degrees();
        StructuralProfile {
            domain: self.domain(),
            range: self.range(),
            set_value_points: (0..self.size()).filter(|&x| out[x] >= 2).collect(),
            max_out_degree: out.iter().copied().max().unwrap_or(0),
            max_in_degree: inn.iter().copied().max().unwrap_or(0),
            self_members: (0..self.size()).filter(|&x| self.images[x].contains(x)).collect(),
            out_degrees: out,
            in_degrees: inn,
        }
    }
}

impl fmt::Debug for Multifunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (x, img) in self.images.iter().enumerate() {
            let targets: Vec<&str> = img.iter().map(|y| self.ground.label(y)).collect();
            m.entry(&self.ground.label(x), &targets);
        }
        m.finish()
    }
}

/// Domain, image and degree summary of a multifunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralProfile {
    pub domain: PointSet,
    pub range: PointSet,
    /// Points whose image has at least two elements.
    pub set_value_points: PointSet,
    pub max_out_degree: usize,
    pub max_in_degree: usize,
    /// Points `x` with `x ∈ F(x)`.
    pub self_members: PointSet,
    pub out_degrees: Vec<usize>,
    pub in_degrees: Vec<usize>,
}

/// A total single-valued map of a ground set into itself.
#[derive(Clone, PartialEq, Eq)]
pub struct SingleMap {
    ground: Arc<GroundSet>,
    image: Vec<usize>,
}

impl SingleMap {
    pub fn new(ground: Arc<GroundSet>, image: Vec<usize>) -> Result<Self> {
        if image.len() != ground.size() {
            return Err(Error::IndexOutOfRange { index: image.len(), size: ground.size() });
        }
        for &y in &image {
            ground.check_point(y)?;
        }
        Ok(SingleMap { ground, image })
    }

    pub fn from_vec(image: Vec<usize>) -> Result<Self> {
        let ground = Arc::new(GroundSet::numbered(image.len())?);
        Self::new(ground, image)
    }

    pub fn identity(ground: Arc<GroundSet>) -> Self {
        let image = (0..ground.size()).collect();
        SingleMap { ground, image }
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.image
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SingleMap) -> Result<SingleMap> {
        if !same_ground(&self.ground, &inner.ground) {
            return Err(Error::GroundMismatch);
        }
        let image = inner.image.iter().map(|&y| self.image[y]).collect();
        Ok(SingleMap { ground: self.ground.clone(), image })
    }

    /// `f^n` by repeated application.
    pub fn iterate(&self, n: u64) -> SingleMap {
        let image = (0..self.size())
            .map(|x| (0..n).fold(x, |y, _| self.image[y]))
            .collect();
        SingleMap { ground: self.ground.clone(), image }
    }

    /// `f^{-1}({y})`.
    pub fn preimage(&self, y: usize) -> PointSet {
        self.image
            .iter()
            .enumerate()
            .filter(|&(_, &fx)| fx == y)
            .map(|(x, _)| x)
            .collect()
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.size()];
        for &y in &self.image {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// The multifunction `x ↦ {f(x)}`.
    pub fn to_multifunction(&self) -> Multifunction {
        let images = self.image.iter().map(|&y| PointSet::singleton(y)).collect();
        Multifunction { ground: self.ground.clone(), images }
    }

    /// Succeeds only if every image of `f` is a singleton.
    pub fn try_from_multifunction(f: &Multifunction) -> Result<SingleMap> {
        let image = f
            .images
            .iter()
            .enumerate()
            .map(|(x, img)| {
                let mut it = img.iter();
                match (it.next(), it.next()) {
                    (Some(y), None) => Ok(y),
                    _ => Err(Error::NotSingleValued(f.ground.label(x).to_string())),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SingleMap { ground: f.ground.clone(), image })
    }
}

impl fmt::Debug for SingleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (x, &y) in self.image.iter().enumerate() {
            m.entry(&self.ground.label(x), &self.ground.label(y));
        }
        m.finish()
    }
}
