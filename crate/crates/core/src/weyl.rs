//! Weight graphs, homogeneous modules, and the minuscule imaginary
//! modules built from them. Everything here assumes a symmetric Cartan
//! matrix; non-symmetric types are rejected at the boundary rather than
//! approximated.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::cartan::{CartanSpec, RootVec};
use crate::error::{Error, Result};
use crate::laurent::LaurentInt;
use crate::relations::{ActionMatrices, IMat};
use crate::shuffle::{CharExpr, Word};

/// A connected component of the weight graph on words of one weight:
/// vertices are words, edges are admissible transpositions (swapping an
/// adjacent pair of letters with Cartan entry zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightGraphComponent {
    pub alpha: RootVec,
    /// Sorted; the component is closed under admissible transpositions.
    pub words: Vec<Word>,
    pub homogeneous: bool,
}

impl WeightGraphComponent {
    pub fn representative(&self) -> &Word {
        &self.words[0]
    }

    /// Sum of the component's words, each with coefficient one.
    pub fn character(&self, spec: &CartanSpec) -> CharExpr {
        CharExpr::from_terms(
            spec,
            self.words.iter().map(|w| (w.clone(), LaurentInt::one())),
        )
        .expect("component words share a weight")
    }
}

fn require_symmetric(spec: &CartanSpec) -> Result<()> {
    if !spec.is_symmetric() {
        return Err(Error::NonSymmetric(spec.type_string()));
    }
    Ok(())
}

fn admissible(spec: &CartanSpec, w: &Word, r: usize) -> bool {
    let (a, b) = (w.0[r] as usize, w.0[r + 1] as usize);
    a != b && spec.cartan_entry(a, b) == 0
}

/// The component of one word, generated by admissible transpositions.
/// Only reachable words are visited, so this works at weights whose
/// full word set would be enormous.
pub fn component_of(spec: &CartanSpec, word: &Word) -> Result<WeightGraphComponent> {
    require_symmetric(spec)?;
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(word.clone());
    queue.push_back(word.clone());
    while let Some(w) = queue.pop_front() {
        for r in 0..w.len().saturating_sub(1) {
            if admissible(spec, &w, r) {
                let mut v = w.0.clone();
                v.swap(r, r + 1);
                let v = Word(v);
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
        }
    }
    let words: Vec<Word> = seen.into_iter().collect();
    let homogeneous = homogeneity_condition(spec, &words[0]);
    Ok(WeightGraphComponent { alpha: word.weight(spec), words, homogeneous })
}

/// All words of the given weight (multiset permutations).
pub fn enumerate_words(spec: &CartanSpec, alpha: &RootVec) -> Result<Vec<Word>> {
    if !alpha.is_nonnegative() || alpha.len() != spec.num_vertices() {
        return Err(Error::Argument(format!("{alpha} is not in Q_+")));
    }
    let mut counts: Vec<i64> = alpha.0.clone();
    let mut out = Vec::new();
    let mut acc: Vec<u8> = Vec::with_capacity(alpha.height() as usize);
    fn go(counts: &mut Vec<i64>, acc: &mut Vec<u8>, out: &mut Vec<Word>) {
        if counts.iter().all(|&c| c == 0) {
            out.push(Word(acc.clone()));
            return;
        }
        for i in 0..counts.len() {
            if counts[i] > 0 {
                counts[i] -= 1;
                acc.push(i as u8);
                go(counts, acc, out);
                acc.pop();
                counts[i] += 1;
            }
        }
    }
    go(&mut counts, &mut acc, &mut out);
    Ok(out)
}

/// Partition of all words of weight alpha into weight-graph components.
pub fn weight_graph_components(
    spec: &CartanSpec,
    alpha: &RootVec,
) -> Result<Vec<WeightGraphComponent>> {
    require_symmetric(spec)?;
    let words = enumerate_words(spec, alpha)?;
    let mut assigned: HashSet<Word> = HashSet::new();
    let mut out = Vec::new();
    for w in words {
        if assigned.contains(&w) {
            continue;
        }
        let comp = component_of(spec, &w)?;
        for cw in &comp.words {
            assigned.insert(cw.clone());
        }
        out.push(comp);
    }
    out.sort_by(|a, b| a.words[0].cmp(&b.words[0]));
    Ok(out)
}

/// The combinatorial homogeneity condition on one representative:
/// whenever a letter repeats at positions r < s, two intermediate
/// letters must each pair to -1 with it.
fn homogeneity_condition(spec: &CartanSpec, word: &Word) -> bool {
    let d = word.len();
    for r in 0..d {
        for s in (r + 1)..d {
            if word.0[r] != word.0[s] {
                continue;
            }
            let hits = (r + 1..s)
                .filter(|&t| {
                    spec.cartan_entry(word.0[r] as usize, word.0[t] as usize) == -1
                })
                .count();
            if hits < 2 {
                return false;
            }
        }
    }
    true
}

pub fn is_homogeneous(spec: &CartanSpec, component: &WeightGraphComponent) -> bool {
    homogeneity_condition(spec, component.representative())
}

/// The homogeneous module on a component: basis indexed by its words,
/// concentrated in degree zero, all y_r acting by zero, and psi_r
/// permuting basis vectors along transpositions that stay inside the
/// component.
pub fn homogeneous_module(
    spec: &CartanSpec,
    component: &WeightGraphComponent,
) -> Result<ActionMatrices> {
    require_symmetric(spec)?;
    if !component.homogeneous {
        return Err(Error::Argument(format!(
            "component of {} is not homogeneous",
            component.representative()
        )));
    }
    let dim = component.words.len();
    let d = component.representative().len();
    let index: HashMap<&Word, usize> =
        component.words.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let y = vec![IMat::zero(dim); d];
    let mut psi = Vec::with_capacity(d.saturating_sub(1));
    for r in 0..d.saturating_sub(1) {
        let mut m = IMat::zero(dim);
        for (b, w) in component.words.iter().enumerate() {
            let mut v = w.0.clone();
            v.swap(r, r + 1);
            let v = Word(v);
            if let Some(&a) = index.get(&v) {
                m.set(a, b, 1);
            }
        }
        psi.push(m);
    }
    Ok(ActionMatrices {
        words: component.words.clone(),
        degrees: vec![0; dim],
        y,
        psi,
    })
}

/// Weyl group element as its matrix action on root coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    n: usize,
    /// column j = image of alpha_j, flattened row-major
    cols: Vec<i64>,
}

impl WeylElement {
    pub fn identity(spec: &CartanSpec) -> Self {
        let n = spec.num_vertices();
        let mut cols = vec![0i64; n * n];
        for j in 0..n {
            cols[j * n + j] = 1;
        }
        WeylElement { n, cols }
    }

    pub fn image_of_simple(&self, j: usize) -> RootVec {
        RootVec(self.cols[j * self.n..(j + 1) * self.n].to_vec())
    }

    /// Right multiplication by the simple reflection r_j.
    pub fn times_reflection(&self, spec: &CartanSpec, j: usize) -> WeylElement {
        let n = self.n;
        let wj = self.image_of_simple(j);
        let mut cols = self.cols.clone();
        for k in 0..n {
            let c = spec.cartan_entry(j, k);
            if c == 0 {
                continue;
            }
            for row in 0..n {
                cols[k * n + row] -= c * wj.0[row];
            }
        }
        WeylElement { n, cols }
    }

    pub fn is_identity(&self) -> bool {
        let mut id = vec![0i64; self.n * self.n];
        for j in 0..self.n {
            id[j * self.n + j] = 1;
        }
        self.cols == id
    }
}

/// w_C for a word (i_1, ..., i_d): the product r_{i_d} ... r_{i_1}.
pub fn word_to_weyl(spec: &CartanSpec, word: &Word) -> WeylElement {
    // Building w r_{i_1}, then (w r_{i_1}) r_{i_2} ... yields
    // r_{i_d} ... r_{i_1} read as left-to-right column updates.
    let mut w = WeylElement::identity(spec);
    for &c in word.0.iter().rev() {
        w = w.times_reflection(spec, c as usize);
    }
    w
}

/// Number of reduced expressions of w, assuming `length` is its Coxeter
/// length. Descents are read off from negative images of simple roots.
pub fn reduced_word_count(spec: &CartanSpec, w: &WeylElement, length: usize) -> u128 {
    fn go(
        spec: &CartanSpec,
        w: &WeylElement,
        length: usize,
        memo: &mut HashMap<(Vec<i64>, usize), u128>,
    ) -> u128 {
        if length == 0 {
            return 1;
        }
        let key = (w.cols.clone(), length);
        if let Some(&hit) = memo.get(&key) {
            return hit;
        }
        let mut total = 0u128;
        for j in 0..spec.num_vertices() {
            let img = w.image_of_simple(j);
            let negative = img.0.iter().all(|&c| c <= 0) && !img.is_zero();
            if negative {
                total += go(spec, &w.times_reflection(spec, j), length - 1, memo);
            }
        }
        memo.insert(key, total);
        total
    }
    go(spec, w, length, &mut HashMap::new())
}

/// The minuscule imaginary module of one color, together with the
/// component data it is built from.
#[derive(Clone, Debug)]
pub struct MinusculeModule {
    pub color: u8,
    /// C(i): component of weight delta - alpha_i.
    pub delta_minus: WeightGraphComponent,
    /// C_i = { j i | j in C(i) }: component of weight delta.
    pub minuscule: WeightGraphComponent,
    /// ch L_{delta - alpha_i}.
    pub char_delta_minus: CharExpr,
    /// ch L_{delta, i}.
    pub char_minuscule: CharExpr,
}

/// Shortest reflection word carrying theta to alpha_i inside the finite
/// Weyl group, by breadth-first search over the orbit. Ascending vertex
/// order breaks ties, so the output is deterministic.
fn descent_word_to_simple(spec: &CartanSpec, i: usize) -> Result<Vec<usize>> {
    let theta = spec.theta().clone();
    let target = spec.simple_root(i);
    let mut parent: HashMap<Vec<i64>, (Vec<i64>, usize)> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut seen = HashSet::new();
    seen.insert(theta.0.clone());
    queue.push_back(theta.clone());
    while let Some(x) = queue.pop_front() {
        if x == target {
            let mut path = Vec::new();
            let mut cur = x.0.clone();
            while let Some((prev, j)) = parent.get(&cur) {
                path.push(*j);
                cur = prev.clone();
            }
            path.reverse();
            return Ok(path);
        }
        for j in 1..=spec.rank() {
            let y = spec.reflect(j, &x);
            if y.is_nonnegative() && seen.insert(y.0.clone()) {
                parent.insert(y.0.clone(), (x.0.clone(), j));
                queue.push_back(y);
            }
        }
    }
    Err(Error::Argument(format!(
        "alpha_{i} is not in the Weyl orbit of theta"
    )))
}

/// Build the minuscule module of color i: the reflection word for the
/// minimal u with u(theta) = alpha_i, prefixed by the affine vertex,
/// seeds the component C(i); appending the color letter gives C_i.
pub fn minuscule_component(spec: &CartanSpec, i: u8) -> Result<MinusculeModule> {
    require_symmetric(spec)?;
    let iu = i as usize;
    if iu == 0 || iu >= spec.num_vertices() {
        return Err(Error::Argument(format!(
            "color must be a finite vertex 1..={}, got {i}",
            spec.rank()
        )));
    }
    let path = descent_word_to_simple(spec, iu)?;
    let mut letters: Vec<u8> = vec![0];
    letters.extend(path.iter().map(|&j| j as u8));
    let seed = Word(letters);
    let expect = spec.delta().sub(&spec.simple_root(iu));
    if seed.weight(spec) != expect {
        return Err(Error::Verification(format!(
            "minuscule seed word {seed} has weight {}, expected {expect}",
            seed.weight(spec)
        )));
    }
    let delta_minus = component_of(spec, &seed)?;
    if !delta_minus.homogeneous {
        return Err(Error::Verification(format!(
            "component of {seed} is not homogeneous"
        )));
    }
    let mut appended = delta_minus.words[0].0.clone();
    appended.push(i);
    let minuscule = component_of(spec, &Word(appended))?;
    // Proposition-level sanity: the appended set is exactly a component.
    let expect_set: BTreeSet<Word> = delta_minus
        .words
        .iter()
        .map(|w| {
            let mut v = w.0.clone();
            v.push(i);
            Word(v)
        })
        .collect();
    let got_set: BTreeSet<Word> = minuscule.words.iter().cloned().collect();
    if expect_set != got_set {
        return Err(Error::Verification(format!(
            "appending color {i} to C({i}) does not close up to a component"
        )));
    }
    let char_delta_minus = delta_minus.character(spec);
    let char_minuscule = minuscule.character(spec);
    Ok(MinusculeModule {
        color: i,
        delta_minus,
        minuscule,
        char_delta_minus,
        char_minuscule,
    })
}

/// ch L_{delta - alpha_i}; every word starts with the affine letter.
pub fn cuspidal_delta_minus(spec: &CartanSpec, i: u8) -> Result<CharExpr> {
    Ok(minuscule_component(spec, i)?.char_delta_minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_cartan, Family};
    use crate::relations::verify_relations;

    #[test]
    fn rank_one_delta_graph_is_two_singletons() {
        let spec = build_cartan(Family::A, 1).unwrap();
        let comps = weight_graph_components(&spec, &spec.delta()).unwrap();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.words.len() == 1));
    }

    #[test]
    fn single_letter_component() {
        let spec = build_cartan(Family::A, 2).unwrap();
        let comps = weight_graph_components(&spec, &spec.simple_root(1)).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].words, vec![Word(vec![1])]);
        assert!(comps[0].homogeneous);
    }

    #[test]
    fn a2_affine_adjacent_letters_do_not_commute() {
        let spec = build_cartan(Family::A, 2).unwrap();
        let alpha = spec.simple_root(0).add(&spec.simple_root(2));
        let comps = weight_graph_components(&spec, &alpha).unwrap();
        // c_{02} = -1 in the triangle, so (0,2) and (2,0) are separate
        assert_eq!(comps.len(), 2);
    }

    #[test]
    fn d4_orthogonal_letters_commute() {
        let spec = build_cartan(Family::D, 4).unwrap();
        let alpha = spec.simple_root(1).add(&spec.simple_root(3));
        let comps = weight_graph_components(&spec, &alpha).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].words.len(), 2);
    }

    #[test]
    fn non_symmetric_rejected() {
        let spec = build_cartan(Family::C, 2).unwrap();
        assert!(matches!(
            weight_graph_components(&spec, &spec.delta()),
            Err(Error::NonSymmetric(_))
        ));
        assert!(minuscule_component(&spec, 1).is_err());
    }

    #[test]
    fn distinct_letters_always_homogeneous() {
        let spec = build_cartan(Family::A, 3).unwrap();
        let w = Word(vec![0, 2, 1, 3]);
        assert!(homogeneity_condition(&spec, &w));
    }

    #[test]
    fn repeated_letter_without_buffer_not_homogeneous() {
        let spec = build_cartan(Family::A, 1).unwrap();
        let w = Word(vec![1, 0, 1, 0]);
        // c_{1,0} = -2, never -1, so the condition fails
        assert!(!homogeneity_condition(&spec, &w));
    }

    #[test]
    fn a2_minuscule_components() {
        let spec = build_cartan(Family::A, 2).unwrap();
        let m1 = minuscule_component(&spec, 1).unwrap();
        assert_eq!(m1.delta_minus.words, vec![Word(vec![0, 2])]);
        assert_eq!(m1.minuscule.words, vec![Word(vec![0, 2, 1])]);
        let m2 = minuscule_component(&spec, 2).unwrap();
        assert_eq!(m2.delta_minus.words, vec![Word(vec![0, 1])]);
    }

    #[test]
    fn rank_one_minuscule() {
        let spec = build_cartan(Family::A, 1).unwrap();
        let m = minuscule_component(&spec, 1).unwrap();
        assert_eq!(m.char_delta_minus, CharExpr::single(&spec, Word(vec![0])));
        assert_eq!(m.char_minuscule, CharExpr::single(&spec, Word(vec![0, 1])));
    }

    #[test]
    fn minuscule_first_letters_and_tails() {
        for (fam, l) in [(Family::A, 2), (Family::A, 3), (Family::D, 4)] {
            let spec = build_cartan(fam, l).unwrap();
            for i in 1..=spec.rank() {
                let m = minuscule_component(&spec, i as u8).unwrap();
                for w in &m.minuscule.words {
                    assert_eq!(w.0[0], 0, "first letter law in {spec}");
                    assert_eq!(*w.0.last().unwrap(), i as u8, "tail color in {spec}");
                }
                // epsilon laws for the minuscule character
                for j in 0..spec.num_vertices() {
                    let expect = if j == i { 1 } else { 0 };
                    assert_eq!(m.char_minuscule.epsilon(j as u8), expect, "{spec} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn minuscule_module_passes_relations() {
        let spec = build_cartan(Family::A, 3).unwrap();
        for i in 1..=3u8 {
            let m = minuscule_component(&spec, i).unwrap();
            let action = homogeneous_module(&spec, &m.minuscule).unwrap();
            let report = verify_relations(&spec, &action);
            assert!(report.passed(), "color {i}: {:?}", report.failures);
        }
    }

    #[test]
    fn reduced_word_count_matches_component_size() {
        let spec = build_cartan(Family::A, 3).unwrap();
        for i in 1..=3u8 {
            let m = minuscule_component(&spec, i).unwrap();
            let rep = m.delta_minus.representative();
            let w = word_to_weyl(&spec, rep);
            let count = reduced_word_count(&spec, &w, rep.len());
            assert_eq!(count, m.delta_minus.words.len() as u128, "color {i}");
        }
        // also a non-minuscule homogeneous component
        let alpha = spec.simple_root(1).add(&spec.simple_root(3));
        let comps = weight_graph_components(&spec, &alpha).unwrap();
        for c in comps.iter().filter(|c| c.homogeneous) {
            let w = word_to_weyl(&spec, c.representative());
            assert_eq!(
                reduced_word_count(&spec, &w, c.representative().len()),
                c.words.len() as u128
            );
        }
    }

    #[test]
    fn inhomogeneous_component_rejected_by_module_builder() {
        let spec = build_cartan(Family::A, 1).unwrap();
        let comp = component_of(&spec, &Word(vec![1, 0, 1, 0])).unwrap();
        assert!(!comp.homogeneous);
        assert!(homogeneous_module(&spec, &comp).is_err());
    }

    /// Independent route to the minuscule components: partition the
    /// whole weight graph at delta and pick out the homogeneous
    /// components whose words start with the affine letter and share
    /// one final letter. There must be exactly one per color and it
    /// must agree with the reflection-word construction.
    #[test]
    fn minuscule_agrees_with_full_graph_partition() {
        for (fam, l) in [(Family::A, 2usize), (Family::A, 3), (Family::D, 4)] {
            let spec = build_cartan(fam, l).unwrap();
            let comps = weight_graph_components(&spec, &spec.delta()).unwrap();
            for i in 1..=l as u8 {
                let matching: Vec<_> = comps
                    .iter()
                    .filter(|c| {
                        c.homogeneous
                            && c.words.iter().all(|w| w.0[0] == 0)
                            && c.words.iter().all(|w| *w.0.last().unwrap() == i)
                    })
                    .collect();
                assert_eq!(matching.len(), 1, "{spec} color {i}");
                let m = minuscule_component(&spec, i).unwrap();
                assert_eq!(matching[0].words, m.minuscule.words, "{spec} color {i}");
            }
        }
    }
}
