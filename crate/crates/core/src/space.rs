//! Simplicial trees with a cocompact action of the model group.
//!
//! * free groups act on their Cayley tree;
//! * a free product of two factors acts on its Bass–Serre tree, whose vertices
//!   are the cosets `g A_0`, `g A_1` and whose edges are the pairs `(g A_0, g A_1)`;
//! * with three or more factors the tree has a centre vertex `g c` joined to the
//!   cosets `g A_i`.
//!
//! All trees are 0-hyperbolic, every edge has length one and no element inverts an edge.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupModel, Syllable};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    /// Cayley tree vertex, or centre vertex `g c` of the star tree.
    Vertex(Element),
    /// Coset vertex `rep A_factor`; `rep` carries no trailing syllable of that factor.
    Coset { factor: u8, rep: Element },
}

impl Point {
    pub fn rep(&self) -> &Element {
        match self {
            Point::Vertex(g) => g,
            Point::Coset { rep, .. } => rep,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeKind {
    Cayley,
    Segment,
    Star,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Base {
    Centre,
    Coset(u8),
}

/// Minimal displacement set of a hyperbolic element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axis {
    pub element: Element,
    pub translation: u64,
    /// Projection of the basepoint of the space onto the axis.
    pub base: Point,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Elliptic { fixed: Point },
    Hyperbolic(Axis),
}

/// Intersection type of two axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Overlap {
    Finite(u64),
    Ray,
    Parallel,
}

#[derive(Clone, Debug)]
pub struct Space {
    group: Group,
    kind: TreeKind,
}

impl Space {
    pub fn new(group: &Group) -> Result<Self> {
        let kind = match group.model() {
            GroupModel::Free { .. } => TreeKind::Cayley,
            _ if group.factor_count() == 2 => TreeKind::Segment,
            _ if group.factor_count() >= 3 => TreeKind::Star,
            _ => {
                return Err(Error::InvalidModel(
                    "a Baumslag-Solitar model needs at least one free factor to act on a tree".into(),
                ))
            }
        };
        Ok(Space {
            group: group.clone(),
            kind,
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    /// Hyperbolicity constant of the tree.
    pub fn delta(&self) -> u64 {
        0
    }

    pub fn basepoint(&self) -> Point {
        match self.kind {
            TreeKind::Cayley | TreeKind::Star => Point::Vertex(Element::identity()),
            TreeKind::Segment => Point::Coset {
                factor: 0,
                rep: Element::identity(),
            },
        }
    }

    /// Base vertex `v_i = A_i` of a factor (the centre for `None`).
    pub fn factor_vertex(&self, factor: Option<u8>) -> Point {
        match factor {
            Some(f) if self.kind != TreeKind::Cayley => Point::Coset {
                factor: f,
                rep: Element::identity(),
            },
            _ => Point::Vertex(Element::identity()),
        }
    }

    /// `g` for a vertex, `g.A0` for a coset vertex.
    pub fn format_point(&self, p: &Point) -> String {
        match p {
            Point::Vertex(g) => self.group.format_compact(g),
            Point::Coset { factor, rep } => format!("{}.A{}", self.group.format_compact(rep), factor),
        }
    }

    pub fn act(&self, g: &Element, p: &Point) -> Point {
        match p {
            Point::Vertex(h) => Point::Vertex(self.group.mul(g, h)),
            Point::Coset { factor, rep } => Point::Coset {
                factor: *factor,
                rep: self.group.strip_factor(self.group.mul(g, rep), *factor),
            },
        }
    }

    fn split(&self, p: &Point) -> Base {
        match p {
            Point::Vertex(_) => Base::Centre,
            Point::Coset { factor, .. } => Base::Coset(*factor),
        }
    }

    fn relative(&self, from: &Point, to: &Point) -> (Base, Point) {
        let h = self.group.inv(from.rep());
        (self.split(from), self.act(&h, to))
    }

    fn first_factor(&self, z: &Point) -> Option<u8> {
        match z {
            Point::Vertex(w) => self.group.first_factor(w),
            Point::Coset { factor, rep } => self.group.first_factor(rep).or(Some(*factor)),
        }
    }

    fn dist_from_base(&self, base: Base, z: &Point) -> u64 {
        match self.kind {
            TreeKind::Cayley => self.group.word_length(z.rep()) as u64,
            TreeKind::Segment => {
                let (Base::Coset(i), Point::Coset { factor: j, rep }) = (base, z) else {
                    unreachable!("segment tree has only coset vertices")
                };
                let n = rep.syllable_count() as u64;
                if n == 0 {
                    (i != *j) as u64
                } else {
                    n + (self.group.first_factor(rep) != Some(i)) as u64
                }
            }
            TreeKind::Star => {
                let n = z.rep().syllable_count() as u64;
                let from_centre = match z {
                    Point::Vertex(_) => 2 * n,
                    Point::Coset { .. } => 2 * n + 1,
                };
                match base {
                    Base::Centre => from_centre,
                    Base::Coset(i) if self.first_factor(z) == Some(i) => from_centre - 1,
                    Base::Coset(_) => from_centre + 1,
                }
            }
        }
    }

    pub fn dist(&self, p: &Point, q: &Point) -> u64 {
        let (base, z) = self.relative(p, q);
        self.dist_from_base(base, &z)
    }

    pub fn displacement(&self, g: &Element, x: &Point) -> u64 {
        self.dist(x, &self.act(g, x))
    }

    /// Point at distance `t` from `p` on the geodesic `[p, q]`; clamps at `q`.
    pub fn point_along(&self, p: &Point, q: &Point, t: u64) -> Point {
        let (base, z) = self.relative(p, q);
        let d = self.dist_from_base(base, &z);
        if t >= d {
            return q.clone();
        }
        if t == 0 {
            return p.clone();
        }
        let local = self.point_from_base(base, &z, t as usize);
        self.act(p.rep(), &local)
    }

    /// Neighbour of `p` on `[p, q]`, `None` when `p == q`.
    pub fn step_toward(&self, p: &Point, q: &Point) -> Option<Point> {
        (p != q).then(|| self.point_along(p, q, 1))
    }

    /// Vertices of the geodesic `[p, q]` in order.
    pub fn geodesic(&self, p: &Point, q: &Point) -> Vec<Point> {
        let d = self.dist(p, q);
        (0..=d).map(|t| self.point_along(p, q, t)).collect()
    }

    fn point_from_base(&self, base: Base, z: &Point, t: usize) -> Point {
        let g = &self.group;
        let w = z.rep();
        match self.kind {
            TreeKind::Cayley => Point::Vertex(letter_prefix(w, t)),
            TreeKind::Segment => {
                let Base::Coset(i) = base else { unreachable!() };
                let offset = (g.first_factor(w) != Some(i)) as usize;
                if t == offset {
                    return Point::Coset {
                        factor: 1 - i,
                        rep: Element::identity(),
                    };
                }
                let k = t - offset;
                let last = w.syllables()[k - 1].factor();
                Point::Coset {
                    factor: 1 - last,
                    rep: g.prefix(w, k),
                }
            }
            TreeKind::Star => {
                let m = match base {
                    Base::Centre => t,
                    Base::Coset(i) if self.first_factor(z) == Some(i) => t + 1,
                    Base::Coset(_) => t - 1,
                };
                self.centre_path(z, m)
            }
        }
    }

    fn centre_path(&self, z: &Point, m: usize) -> Point {
        let w = z.rep();
        let k = m / 2;
        if m % 2 == 0 {
            return Point::Vertex(self.group.prefix(w, k));
        }
        if k < w.syllable_count() {
            Point::Coset {
                factor: w.syllables()[k].factor(),
                rep: self.group.prefix(w, k),
            }
        } else {
            z.clone()
        }
    }

    /// `max(0, d(x, g^2 x) - d(x, g x))`, exact on trees.
    pub fn translation_length(&self, g: &Element) -> u64 {
        let x = self.basepoint();
        let gx = self.act(g, &x);
        let g2x = self.act(g, &gx);
        self.dist(&x, &g2x).saturating_sub(self.dist(&x, &gx))
    }

    pub fn classify(&self, g: &Element) -> Classification {
        let lambda = self.translation_length(g);
        let x = self.basepoint();
        let proj = self.project_to_min(g, lambda, &x);
        if lambda == 0 {
            Classification::Elliptic { fixed: proj }
        } else {
            Classification::Hyperbolic(Axis {
                element: g.clone(),
                translation: lambda,
                base: proj,
            })
        }
    }

    /// Nearest point of `Min(g)` to `x`.
    pub fn project_to_min(&self, g: &Element, lambda: u64, x: &Point) -> Point {
        let gx = self.act(g, x);
        let d = self.dist(x, &gx);
        self.point_along(x, &gx, (d - lambda) / 2)
    }

    pub fn axis(&self, g: &Element) -> Option<Axis> {
        match self.classify(g) {
            Classification::Hyperbolic(a) => Some(a),
            Classification::Elliptic { .. } => None,
        }
    }

    /// `L(g) = inf_x d(x, g x)` with a point realising it.
    pub fn min_displacement(&self, g: &Element) -> (u64, Point) {
        match self.classify(g) {
            Classification::Hyperbolic(a) => (a.translation, a.base),
            Classification::Elliptic { fixed } => (0, fixed),
        }
    }

    pub fn in_min_set(&self, g: &Element, x: &Point) -> bool {
        self.displacement(g, x) == self.translation_length(g)
    }

    pub fn dist_to_axis(&self, axis: &Axis, p: &Point) -> u64 {
        (self.displacement(&axis.element, p) - axis.translation) / 2
    }

    /// Point of the axis at signed offset `t` from its base point.
    pub fn axis_point(&self, axis: &Axis, t: i64) -> Point {
        let l = axis.translation as i64;
        let q = t.div_euclid(l);
        let r = t.rem_euclid(l) as u64;
        let shift = self.group.pow(&axis.element, q);
        let start = self.act(&shift, &axis.base);
        let end = self.act(&axis.element, &start);
        self.point_along(&start, &end, r)
    }

    /// Length of `[p, q] ∩ [r, s]`.
    pub fn segment_overlap(&self, p: &Point, q: &Point, r: &Point, s: &Point) -> u64 {
        let pq = self.dist(p, q) as i64;
        let rs = self.dist(r, s) as i64;
        let a = self.dist(p, r) as i64 + self.dist(q, s) as i64;
        let b = self.dist(p, s) as i64 + self.dist(q, r) as i64;
        ((pq + rs - a.min(b)) / 2).max(0) as u64
    }

    /// Gromov product `(y | z)_x`; equals `d(x, [y, z])` on a tree.
    pub fn gromov_product(&self, x: &Point, y: &Point, z: &Point) -> u64 {
        (self.dist(x, y) + self.dist(x, z) - self.dist(y, z)) / 2
    }

    fn window_overlap(&self, a: &Axis, b: &Axis, r: i64) -> u64 {
        let g = &self.group;
        let ga = g.pow(&a.element, r);
        let gb = g.pow(&b.element, r);
        self.segment_overlap(
            &self.act(&g.inv(&ga), &a.base),
            &self.act(&ga, &a.base),
            &self.act(&g.inv(&gb), &b.base),
            &self.act(&gb, &b.base),
        )
    }

    /// Compares growing windows of the two axes until the overlap stabilises.
    pub fn axes_overlap(&self, a: &Axis, b: &Axis) -> Overlap {
        let lmin = a.translation.min(b.translation);
        let d = self.dist(&a.base, &b.base);
        let r0 = ((d + a.translation + b.translation) / lmin + 2) as i64;
        let mut r = r0;
        while r <= r0 * 64 {
            let o1 = self.window_overlap(a, b, r);
            let o2 = self.window_overlap(a, b, r + 1);
            if o1 == o2 {
                return Overlap::Finite(o1);
            }
            r *= 2;
        }
        let on_a = |t: i64| {
            let z = self.act(&self.group.pow(&b.element, t), &b.base);
            self.in_min_set(&a.element, &z)
        };
        match (on_a(r), on_a(-r)) {
            (true, true) => Overlap::Parallel,
            (false, false) => Overlap::Finite(self.window_overlap(a, b, r)),
            _ => Overlap::Ray,
        }
    }

    /// Does `h` stabilise the axis of `g` (membership in the maximal elementary subgroup)?
    ///
    /// Edge stabilisers are trivial in every model, so two hyperbolic elements
    /// share an axis exactly when they commute; this is a single product comparison.
    pub fn stabilises_axis(&self, axis: &Axis, h: &Element) -> bool {
        let g = &self.group;
        let conj = g.conj(h, &axis.element);
        g.mul(&conj, &axis.element) == g.mul(&axis.element, &conj)
    }

    /// `min_x max_{s in S} d(x, s x)` with a minimiser, by certified descent.
    pub fn joint_displacement(&self, set: &[Element]) -> (u64, Point) {
        let mut x = self.basepoint();
        let eval = |x: &Point| set.iter().map(|s| self.displacement(s, x)).max().unwrap_or(0);
        loop {
            let f = eval(&x);
            if f == 0 {
                return (0, x);
            }
            let maximisers: Vec<&Element> =
                set.iter().filter(|s| self.displacement(s, &x) == f).collect();
            if maximisers.iter().any(|s| self.translation_length(s) == f) {
                return (f, x);
            }
            let mut dirs = maximisers.iter().map(|s| {
                let sx = self.act(s, &x);
                self.point_along(&x, &sx, 1)
            });
            let first = dirs.next().expect("at least one maximiser");
            if dirs.any(|d| d != first) {
                return (f, x);
            }
            if eval(&first) < f {
                x = first;
            } else {
                return (f, x);
            }
        }
    }

    /// Largest four-point defect over all quadruples of `points`, in half-edges.
    pub fn four_point_delta_halves(&self, points: &[Point]) -> u64 {
        let n = points.len();
        let d: Vec<Vec<u64>> = points
            .iter()
            .map(|p| points.iter().map(|q| self.dist(p, q)).collect())
            .collect();
        let mut worst = 0;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for e in c + 1..n {
                        let mut sums = [d[a][b] + d[c][e], d[a][c] + d[b][e], d[a][e] + d[b][c]];
                        sums.sort_unstable();
                        worst = worst.max(sums[2] - sums[1]);
                    }
                }
            }
        }
        worst
    }
}

fn letter_prefix(w: &Element, t: usize) -> Element {
    let mut out = Vec::new();
    let mut left = t as i64;
    for s in w.syllables() {
        if left == 0 {
            break;
        }
        let Syllable::Cyclic { factor, exp } = s else {
            unreachable!("Cayley trees are only used for free groups")
        };
        let take = exp.abs().min(left);
        out.push(Syllable::Cyclic {
            factor: *factor,
            exp: take * exp.signum(),
        });
        left -= take;
    }
    Element::from_syllables(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupModel;

    fn space(m: &str) -> Space {
        Space::new(&Group::new(m.parse().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn free_group_distances() {
        let x = space("f2");
        let g = x.group().clone();
        let b = x.basepoint();
        let ab = g.parse("ab").unwrap();
        assert_eq!(x.dist(&b, &x.act(&ab, &b)), 2);
        assert_eq!(x.translation_length(&ab), 2);
        assert_eq!(x.translation_length(&g.parse("abA").unwrap()), 1);
        assert_eq!(x.translation_length(&g.parse("aaB").unwrap()), 3);
    }

    #[test]
    fn segment_tree() {
        let x = space("fp:2,3");
        let g = x.group().clone();
        let vs = x.factor_vertex(Some(0));
        let t = g.parse("t").unwrap();
        assert_eq!(x.dist(&vs, &x.act(&t, &vs)), 2);
        let st = g.parse("st").unwrap();
        assert_eq!(x.displacement(&st, &vs), 2);
        assert_eq!(x.translation_length(&st), 2);
        let (l, p) = x.min_displacement(&t);
        assert_eq!(l, 0);
        assert_eq!(p, x.factor_vertex(Some(1)));
        assert_eq!(x.translation_length(&g.parse("s").unwrap()), 0);
    }

    #[test]
    fn star_tree() {
        let x = space("fp:2,2,2");
        let g = x.group().clone();
        let c = x.basepoint();
        let st = g.parse("st").unwrap();
        assert_eq!(x.displacement(&st, &c), 4);
        assert_eq!(x.translation_length(&st), 4);
        let vs = x.factor_vertex(Some(0));
        assert_eq!(x.dist(&vs, &c), 1);
        assert_eq!(x.dist(&vs, &x.act(&g.parse("t").unwrap(), &vs)), 4);
        assert_eq!(x.translation_length(&g.parse("stu").unwrap()), 6);
    }

    #[test]
    fn bs_model_needs_free_factor() {
        let g = Group::new(GroupModel::bs(2, 3, 0)).unwrap();
        assert!(Space::new(&g).is_err());
        let x = space("bs:2,3,1");
        let g = x.group().clone();
        assert_eq!(x.translation_length(&g.parse("az").unwrap()), 2);
        assert_eq!(x.translation_length(&g.parse("taT").unwrap()), 0);
    }

    #[test]
    fn joint_displacement_examples() {
        let x = space("f2");
        let s = crate::GeneratingSet::standard(x.group());
        assert_eq!(x.joint_displacement(s.elements()).0, 1);
        let x = space("fp:2,3");
        let s = crate::GeneratingSet::standard(x.group());
        let (l, p) = x.joint_displacement(s.elements());
        assert_eq!(l, 2);
        assert_eq!(p, x.factor_vertex(Some(0)));
        let x = space("z");
        let s = crate::GeneratingSet::standard(x.group());
        assert_eq!(x.joint_displacement(s.elements()).0, 1);
    }

    #[test]
    fn overlap_types() {
        let x = space("f2");
        let g = x.group().clone();
        let a = x.axis(&g.parse("a").unwrap()).unwrap();
        let a2 = x.axis(&g.parse("aa").unwrap()).unwrap();
        let b = x.axis(&g.parse("b").unwrap()).unwrap();
        let ab = x.axis(&g.parse("ab").unwrap()).unwrap();
        assert_eq!(x.axes_overlap(&a, &a2), Overlap::Parallel);
        assert_eq!(x.axes_overlap(&a, &b), Overlap::Finite(0));
        assert_eq!(x.axes_overlap(&a, &ab), Overlap::Finite(1));
        let conj = x.axis(&g.parse("baB").unwrap()).unwrap();
        assert_eq!(x.axes_overlap(&a, &conj), Overlap::Finite(0));
        assert!(x.stabilises_axis(&a, &g.parse("aaa").unwrap()));
        assert!(!x.stabilises_axis(&a, &g.parse("b").unwrap()));
    }
}
