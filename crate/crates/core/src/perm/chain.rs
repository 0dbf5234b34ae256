//! Stabilizer chains built by incremental Schreier–Sims.
//!
//! Level `i` stores generators `S_i` fixing the base points `b_0..b_{i-1}`, the
//! orbit of `b_i` under `<S_i>` and a transversal for it. Every Schreier
//! generator of level `i` is a member of `<S_{i+1}>`, so `<S_{i+1}>` is the
//! stabilizer of `b_i` in `<S_i>` and the group order is the product of the
//! orbit lengths.

use rand::Rng;

use super::Permutation;

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    /// `transversal[x] = (u, u^-1)` with `u(point) = x`.
    transversal: Vec<Option<(Permutation, Permutation)>>,
}

impl Level {
    fn new(point: usize, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        let id = Permutation::identity(degree);
        transversal[point] = Some((id.clone(), id));
        Level { point, gens: Vec::new(), orbit: vec![point], transversal }
    }
}

#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    base_hint: Vec<usize>,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize) -> Self {
        StabChain { degree, base_hint: Vec::new(), levels: Vec::new() }
    }

    /// A chain whose base starts with `hint` (as far as the group is nontrivial).
    pub fn with_base(degree: usize, hint: &[usize]) -> Self {
        StabChain { degree, base_hint: hint.to_vec(), levels: Vec::new() }
    }

    pub fn from_generators<'a>(
        degree: usize,
        gens: impl IntoIterator<Item = &'a Permutation>,
        hint: &[usize],
    ) -> Self {
        let mut chain = StabChain::with_base(degree, hint);
        for g in gens {
            chain.extend(g);
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    /// Adds `g` to the group. Returns false if it was already a member.
    pub fn extend(&mut self, g: &Permutation) -> bool {
        assert_eq!(g.degree(), self.degree, "degree mismatch");
        if self.contains(g) {
            return false;
        }
        self.add_gen(0, g.clone());
        true
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        let (residue, _) = self.sift(g, 0);
        residue.is_identity()
    }

    /// Strips `g` through the levels starting at `from`; returns the residue
    /// and the index of the level where stripping stopped.
    pub fn sift(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let x = h.apply(level.point);
            match &level.transversal[x] {
                None => return (h, i),
                Some((_, u_inv)) => h = u_inv * &h,
            }
        }
        (h, self.levels.len())
    }

    /// Strong generators fixing the first `level` base points; they generate the
    /// pointwise stabilizer of those points.
    pub fn generators_at(&self, level: usize) -> &[Permutation] {
        self.levels.get(level).map(|l| l.gens.as_slice()).unwrap_or(&[])
    }

    pub fn levels(&self) -> usize {
        self.levels.len()
    }

    /// Transversal element at `level` mapping the base point to `x`.
    pub fn transversal(&self, level: usize, x: usize) -> Option<&Permutation> {
        self.levels[level].transversal[x].as_ref().map(|(u, _)| u)
    }

    /// Inverse of [`StabChain::transversal`].
    pub fn transversal_inverse(&self, level: usize, x: usize) -> Option<&Permutation> {
        self.levels[level].transversal[x].as_ref().map(|(_, u_inv)| u_inv)
    }

    pub fn base_point(&self, level: usize) -> usize {
        self.levels[level].point
    }

    pub fn basic_orbit(&self, level: usize) -> &[usize] {
        &self.levels[level].orbit
    }

    fn next_base_point(&self, level: usize, g: &Permutation) -> usize {
        match self.base_hint.get(level) {
            Some(&p) => p,
            None => g.first_moved_point().expect("identity never reaches a new level"),
        }
    }

    fn add_gen(&mut self, level: usize, g: Permutation) {
        if level == self.levels.len() {
            let point = self.next_base_point(level, &g);
            self.levels.push(Level::new(point, self.degree));
        }
        let lvl = &mut self.levels[level];
        let old_len = lvl.orbit.len();
        lvl.gens.push(g);
        let new_gen = lvl.gens.len() - 1;

        // Pairs (orbit index, generator index) whose Schreier generator is new:
        // old points with the new generator, new points with every generator.
        let mut pairs: Vec<(usize, usize)> = (0..old_len).map(|i| (i, new_gen)).collect();
        let mut frontier = pairs.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (i, s) in frontier {
                let x = lvl.orbit[i];
                let y = lvl.gens[s].apply(x);
                if lvl.transversal[y].is_none() {
                    let u = &lvl.gens[s] * &lvl.transversal[x].as_ref().unwrap().0;
                    let u_inv = u.inverse();
                    lvl.transversal[y] = Some((u, u_inv));
                    lvl.orbit.push(y);
                    let j = lvl.orbit.len() - 1;
                    for t in 0..lvl.gens.len() {
                        pairs.push((j, t));
                        next.push((j, t));
                    }
                }
            }
            frontier = next;
        }

        for (i, s) in pairs {
            let schreier = {
                let lvl = &self.levels[level];
                let x = lvl.orbit[i];
                let gen = &lvl.gens[s];
                let y = gen.apply(x);
                let (u_x, _) = lvl.transversal[x].as_ref().unwrap();
                let (_, u_y_inv) = lvl.transversal[y].as_ref().unwrap();
                &(u_y_inv * gen) * u_x
            };
            let (residue, _) = self.sift(&schreier, level + 1);
            if !residue.is_identity() {
                self.add_gen(level + 1, residue);
            }
        }
    }

    /// Uniformly random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let x = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = &level.transversal[x].as_ref().unwrap().0 * &g;
        }
        g
    }

    /// All elements, as products of transversal elements.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut acc = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(acc.len() * level.orbit.len());
            for &x in &level.orbit {
                let u = &level.transversal[x].as_ref().unwrap().0;
                for h in &acc {
                    next.push(u * h);
                }
            }
            acc = next;
        }
        acc
    }
}
