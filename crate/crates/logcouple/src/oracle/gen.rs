//! Seeded random generators for vectors, terms, s-functions and conditions.
//!
//! Streams are deterministic per configuration: the same `GenConfig` always
//! reproduces the same samples, and each suite derives its own generator so
//! suites can run in any order or subset with identical results.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::GenConfig;
use crate::couple::PsiElement;
use crate::sfunc::SFunction;
use crate::term::{Condition, Rel, Term};
use crate::vector::{rat, LogVector, Rational};

/// Deterministic generator stream for one suite.
pub struct Gen {
    rng: ChaCha8Rng,
    cfg: GenConfig,
}

impl Gen {
    /// A stream seeded from the configuration and a per-suite tag, so that
    /// suites are independent of each other.
    pub fn new(cfg: &GenConfig, tag: &str) -> Self {
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&cfg.seed.to_le_bytes());
        for (i, b) in tag.bytes().enumerate() {
            seed[8 + (i % 24)] ^= b.wrapping_mul(31).wrapping_add(i as u8);
        }
        Gen {
            rng: ChaCha8Rng::from_seed(seed),
            cfg: cfg.clone(),
        }
    }

    pub fn cfg(&self) -> &GenConfig {
        &self.cfg
    }

    pub fn rational(&mut self) -> Rational {
        let max_n = self.cfg.max_numerator as i64;
        let numer = self.rng.gen_range(-max_n..=max_n);
        let denom = self.rng.gen_range(1..=self.cfg.max_denominator as i64);
        rat(numer, denom)
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let q = self.rational();
            if q != Rational::from_integer(0.into()) {
                return q;
            }
        }
    }

    pub fn small_int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, percent: u32) -> bool {
        self.rng.gen_range(0..100) < percent
    }

    /// A vector with support inside `0..max_support`; may be zero.
    pub fn vector(&mut self) -> LogVector {
        let len = self.rng.gen_range(0..=self.cfg.max_support.min(8)) as usize;
        let mut entries = Vec::with_capacity(len);
        for _ in 0..len {
            let index = self.rng.gen_range(0..self.cfg.max_support);
            entries.push((index, self.nonzero_rational()));
        }
        LogVector::from_coords(entries)
    }

    pub fn nonzero_vector(&mut self) -> LogVector {
        loop {
            let v = self.vector();
            if !v.is_zero() {
                return v;
            }
        }
    }

    pub fn positive_vector(&mut self) -> LogVector {
        let v = self.nonzero_vector();
        if v.is_positive() {
            v
        } else {
            v.neg()
        }
    }

    pub fn psi_element(&mut self) -> PsiElement {
        PsiElement(self.rng.gen_range(0..=self.cfg.max_level))
    }

    /// A vector whose all-ones prefix has length exactly `level`, so its
    /// successor lands at that level.
    pub fn vector_with_succ_level(&mut self, level: u32) -> LogVector {
        let mut entries: Vec<(u32, Rational)> = (0..level)
            .map(|i| (i, Rational::from_integer(1.into())))
            .collect();
        let head = loop {
            let c = self.rational();
            if c != Rational::from_integer(1.into()) {
                break c;
            }
        };
        entries.push((level, head));
        for _ in 0..self.rng.gen_range(0..3) {
            let index = level + 1 + self.rng.gen_range(0..4);
            entries.push((index, self.nonzero_rational()));
        }
        LogVector::from_coords(entries)
    }

    /// A vector with a randomized successor level, so the suites exercise
    /// more than the generic leading-coordinate case.
    pub fn vector_varied(&mut self) -> LogVector {
        if self.chance(50) {
            self.vector()
        } else {
            let level = self.rng.gen_range(0..=4);
            self.vector_with_succ_level(level)
        }
    }

    /// Strictly increasing image-set elements with nonzero coefficients.
    /// When `force_sum` is given, the last coefficient is adjusted so the
    /// coefficient sum hits it exactly (retrying while that would zero it).
    pub fn psi_combination(
        &mut self,
        max_terms: u32,
        force_sum: Option<&Rational>,
    ) -> Vec<(PsiElement, Rational)> {
        let n = self.rng.gen_range(1..=max_terms.max(1)) as usize;
        let min_terms = if force_sum.is_some() { 2.max(n) } else { n };
        loop {
            let mut levels: Vec<u32> = Vec::new();
            while levels.len() < min_terms {
                let l = self.rng.gen_range(0..=self.cfg.max_level);
                if !levels.contains(&l) {
                    levels.push(l);
                }
            }
            levels.sort_unstable();
            let mut coeffs: Vec<Rational> =
                (0..min_terms).map(|_| self.nonzero_rational()).collect();
            if let Some(target) = force_sum {
                let partial: Rational = coeffs[..min_terms - 1].iter().cloned().sum();
                let last = target.clone() - partial;
                if last == Rational::from_integer(0.into()) {
                    continue;
                }
                coeffs[min_terms - 1] = last;
            }
            return levels.into_iter().map(PsiElement).zip(coeffs).collect();
        }
    }

    /// A linear s-function. Scenarios are biased so every row of the
    /// composition tables gets exercised: zero offset, offset with zero or
    /// matching coefficient sum, and fully random offsets.
    pub fn linear_sfunction(&mut self) -> SFunction {
        let n = self.rng.gen_range(1..=4usize);
        let mut ks: Vec<i64> = Vec::new();
        while ks.len() < n {
            let k = self.small_int(-4, 4);
            if !ks.contains(&k) {
                ks.push(k);
            }
        }
        ks.sort_unstable();
        let shifts: Vec<(i64, Rational)> = ks
            .into_iter()
            .map(|k| (k, self.nonzero_rational()))
            .collect();
        let q: Rational = shifts.iter().map(|(_, c)| c.clone()).sum();

        let beta = match self.rng.gen_range(0..6) {
            0 => LogVector::zero(),
            // first coordinate equal to the shift coefficient sum
            1 => {
                let v = self.vector();
                let adjust = q.clone() - v.coord(0);
                v.add(&LogVector::from_coords([(0, adjust)]))
            }
            // first coordinate one less, matching the successor table row
            2 => {
                let v = self.vector();
                let adjust = q.clone() - Rational::from_integer(1.into()) - v.coord(0);
                v.add(&LogVector::from_coords([(0, adjust)]))
            }
            // an image-set element
            3 => self.psi_element().to_vector(),
            _ => self.vector(),
        };
        SFunction::linear(shifts, beta)
    }

    pub fn sfunction(&mut self) -> SFunction {
        if self.chance(15) {
            let value = if self.chance(30) {
                crate::vector::ExtValue::Infinity
            } else {
                crate::vector::ExtValue::Finite(self.vector())
            };
            SFunction::Constant(value)
        } else {
            self.linear_sfunction()
        }
    }

    /// A random term of the given depth. Constant leaves lean on vectors
    /// with all-ones prefixes so compositions hit every successor level.
    pub fn term(&mut self, depth: u32) -> Term {
        if depth == 0 {
            return match self.rng.gen_range(0..5) {
                0 => Term::Zero,
                1 => Term::Infty,
                2 | 3 => Term::Var,
                _ => Term::Const(self.vector_varied()),
            };
        }
        match self.rng.gen_range(0..8) {
            0 => Term::add(self.term(depth - 1), self.term(depth - 1)),
            1 => Term::neg(self.term(depth - 1)),
            2 => Term::psi(self.term(depth - 1)),
            3 => Term::s(self.term(depth - 1)),
            4 => Term::p(self.term(depth - 1)),
            5 => Term::delta(self.rng.gen_range(1..=6), self.term(depth - 1)),
            _ => self.term(depth - 1),
        }
    }

    /// A condition built from `atoms` comparisons of shallow terms.
    pub fn condition(&mut self, atoms: u32) -> Condition {
        let rel = match self.rng.gen_range(0..3) {
            0 => Rel::Lt,
            1 => Rel::Eq,
            _ => Rel::Gt,
        };
        let depth = self.rng.gen_range(1..=3);
        let atom = Condition::atom(self.term(depth), rel, self.term(depth));
        if atoms <= 1 {
            if self.chance(20) {
                return Condition::not(atom);
            }
            return atom;
        }
        let rest = self.condition(atoms - 1);
        match self.rng.gen_range(0..3) {
            0 => Condition::and(atom, rest),
            1 => Condition::or(atom, rest),
            _ => Condition::and(Condition::not(atom), rest),
        }
    }
}
