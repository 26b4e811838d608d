//! Images of product homomorphisms and Reidemeister-Schreier kernel
//! generators.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::homs::PermHom;
use crate::perm::Permutation;
use crate::presentation::Presentation;
use crate::word::{Letter, Word};

/// The image group of the product homomorphism, acting on the disjoint union
/// of the factor point sets, together with a breadth-first Schreier tree.
#[derive(Clone, Debug)]
pub struct ImageGroup {
    /// Image of each source generator.
    pub generators: Vec<Permutation>,
    pub degree: usize,
    /// Elements in breadth-first order from the identity.
    pub elements: Vec<Permutation>,
    /// Tree edge into each element: (parent element, generator). `None` for
    /// the identity.
    parent: Vec<Option<(usize, usize)>>,
    index: HashMap<Permutation, usize>,
}

impl ImageGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Transversal word of element `e`: the tree path from the identity.
    pub fn transversal(&self, mut e: usize) -> Word {
        let mut letters = Vec::new();
        while let Some((parent, g)) = self.parent[e] {
            letters.push(Letter::gen(g));
            e = parent;
        }
        letters.reverse();
        Word::from_letters(letters)
    }

    pub fn element_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Image of a source word.
    pub fn evaluate(&self, w: &Word) -> Permutation {
        Permutation::evaluate(w, &self.generators, self.degree)
    }
}

/// Product of the homomorphisms and the order of its image, by closure.
/// All homomorphisms must share a source with `num_generators` generators.
pub fn permutation_image(num_generators: usize, homs: &[PermHom], order_cap: u64) -> Result<ImageGroup> {
    let degree: usize = homs.iter().map(|h| h.degree).sum();
    let generators: Vec<Permutation> = (0..num_generators)
        .map(|g| {
            homs.iter()
                .fold(Permutation::identity(0), |acc, h| acc.direct_sum(&h.images[g]))
        })
        .collect();
    let id = Permutation::identity(degree);
    let mut elements = vec![id.clone()];
    let mut parent = vec![None];
    let mut index = HashMap::new();
    index.insert(id, 0);
    if order_cap == 0 {
        return Err(Error::BudgetExceeded {
            what: "image order",
            limit: order_cap,
        });
    }
    let mut i = 0;
    while i < elements.len() {
        for (g, gen) in generators.iter().enumerate() {
            let y = elements[i].then(gen);
            if !index.contains_key(&y) {
                if elements.len() as u64 >= order_cap {
                    return Err(Error::BudgetExceeded {
                        what: "image order",
                        limit: order_cap,
                    });
                }
                index.insert(y.clone(), elements.len());
                elements.push(y);
                parent.push(Some((i, g)));
            }
        }
        i += 1;
    }
    Ok(ImageGroup {
        generators,
        degree,
        elements,
        parent,
        index,
    })
}

/// Schreier generators `t(x) s t(xs)^-1` of the kernel of the product map,
/// freely reduced, with trivial words, duplicates and inverses of earlier
/// words removed. They generate the kernel as a subgroup.
pub fn kernel_generators(p: &Presentation, image: &ImageGroup) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let transversals: Vec<Word> = (0..image.order()).map(|e| image.transversal(e)).collect();
    for (x, tx) in transversals.iter().enumerate() {
        for s in 0..p.num_generators() {
            let xs = image.elements[x].then(&image.generators[s]);
            let y = image.index[&xs];
            let w = tx.mul(&Word::letter(Letter::gen(s))).mul(&transversals[y].inverse());
            if w.is_empty() || seen.contains(&w) || seen.contains(&w.inverse()) {
                continue;
            }
            seen.insert(w.clone());
            out.push(w);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homs::enumerate_homs;

    fn transposition() -> Permutation {
        Permutation::from_cycles(2, &[&[0, 1]]).unwrap()
    }

    #[test]
    fn image_of_identity_and_swap() {
        let homs = vec![
            PermHom {
                degree: 2,
                images: vec![Permutation::identity(2)],
            },
            PermHom {
                degree: 2,
                images: vec![transposition()],
            },
        ];
        let img = permutation_image(1, &homs, 100).unwrap();
        assert_eq!(img.degree, 4);
        assert_eq!(img.order(), 2);
    }

    #[test]
    fn trivial_hom_has_trivial_image() {
        let homs = vec![PermHom {
            degree: 3,
            images: vec![Permutation::identity(3)],
        }];
        assert_eq!(permutation_image(1, &homs, 100).unwrap().order(), 1);
    }

    #[test]
    fn involutions_of_sym3_generate_order_two() {
        let p = Presentation::from_text(&["a"], &["a^2"]).unwrap();
        let homs = enumerate_homs(&p, 3, 100).unwrap();
        let img = permutation_image(1, &homs, 100).unwrap();
        assert_eq!(img.degree, 12);
        assert_eq!(img.order(), 2);
    }

    #[test]
    fn kernel_of_swap_is_squares() {
        let p = Presentation::free(["a"]).unwrap();
        let homs = vec![PermHom {
            degree: 2,
            images: vec![transposition()],
        }];
        let img = permutation_image(1, &homs, 100).unwrap();
        assert_eq!(kernel_generators(&p, &img), vec![p.word("a^2").unwrap()]);
    }

    #[test]
    fn kernel_of_trivial_hom_is_everything() {
        let p = Presentation::free(["a"]).unwrap();
        let homs = vec![PermHom {
            degree: 2,
            images: vec![Permutation::identity(2)],
        }];
        let img = permutation_image(1, &homs, 100).unwrap();
        assert_eq!(kernel_generators(&p, &img), vec![p.word("a").unwrap()]);
    }

    #[test]
    fn kernel_in_cyclic_group_of_order_six() {
        // <a | a^6> with a -> (0 1): kernel is the image of <a^2>
        let p = Presentation::from_text(&["a"], &["a^6"]).unwrap();
        let homs = vec![PermHom {
            degree: 2,
            images: vec![transposition()],
        }];
        let img = permutation_image(1, &homs, 100).unwrap();
        let gens = kernel_generators(&p, &img);
        let sums: Vec<i64> = gens.iter().map(|w| w.exponent_sums(1)[0]).collect();
        // subgroup of Z generated by the exponent sums, together with 6Z, is 2Z
        let g = sums.iter().fold(6i64, |acc, &s| num_integer::gcd(acc, s));
        assert_eq!(g, 2);
    }

    #[test]
    fn order_cap() {
        let p = Presentation::free(["a"]).unwrap();
        let homs = enumerate_homs(&p, 3, 100).unwrap();
        assert!(permutation_image(1, &homs, 5).unwrap_err().is_budget());
        assert_eq!(permutation_image(1, &homs, 6).unwrap().order(), 6);
    }
}
