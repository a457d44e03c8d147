//! Embedded benchmark corpus.
//!
//! Classic test systems for the solver: small ideals with finitely many
//! real points (some with infinite complex varieties), a Gaussian
//! quadrature system, Katsura-5, and the univariate sanity cases. Systems
//! are stored in the input text format so the corpus also exercises the
//! parser.

use realvar_core::PolySystem;

use crate::parse::parse_system;

pub struct BenchEntry {
    pub name: &'static str,
    /// What the system is, in one line.
    pub blurb: &'static str,
    pub source: &'static str,
    /// What a default real-mode solve must produce.
    pub expect: Expected,
}

/// Compact expectation for the bench runner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    /// Stopping order and verified real root count.
    Solved { t: usize, s: usize, roots: usize },
    /// Empty-variety certificate no later than this order.
    EmptyBy { t: usize },
}

pub const COX98: &str = "\
# three quadric/cubic generators in three variables; 8 complex roots, 2 real
vars x1 x2 x3;
x1^2 - 2*x1*x3 + 5;
x1*x2^2 + x2*x3 + 1;
3*x2^2 - 8*x1*x3;
";

pub const COX98_POSDIM: &str = "\
# the same generators scaled by (1 + x1^2 + x2^2 + x3^2): the complex
# variety becomes positive dimensional, the real variety is unchanged
vars x1 x2 x3;
x1^4 + x1^2*x2^2 + x1^2*x3^2 - 2*x1^3*x3 - 2*x1*x2^2*x3 - 2*x1*x3^3 + 6*x1^2 + 5*x2^2 + 5*x3^2 - 2*x1*x3 + 5;
x1^3*x2^2 + x1*x2^4 + x1*x2^2*x3^2 + x1^2*x2*x3 + x2^3*x3 + x2*x3^3 + x1^2 + x2^2 + x3^2 + x1*x2^2 + x2*x3 + 1;
3*x1^2*x2^2 + 3*x2^4 + 3*x2^2*x3^2 - 8*x1^3*x3 - 8*x1*x2^2*x3 - 8*x1*x3^3 + 3*x2^2 - 8*x1*x3;
";

pub const COX3: &str = "\
# two real points, one of multiplicity eight
vars x1 x2;
x2^4*x1 + 3*x1^3 - x2^4 - 3*x1^2;
x1^2*x2 - 2*x1^2;
2*x2^4*x1 - x1^3 - 2*x2^4 + x1^2;
";

pub const GAUSS: &str = "\
# Gaussian quadrature with two weights and two knots
vars x1 x2 x3 x4;
x1 + x2 - 2;
x1*x3 + x2*x4;
x1*x3^2 + x2*x4^2 - 0.6666666666666666;
x1*x3^3 + x2*x4^3;
";

pub const KATSURA5: &str = "\
# Katsura-5: 32 complex roots, 12 real
vars x1 x2 x3 x4 x5 x6;
2*x6^2 + 2*x5^2 + 2*x4^2 + 2*x3^2 + 2*x2^2 + x1^2 - x1;
x6*x5 + x5*x4 + 2*x4*x3 + 2*x3*x2 + 2*x2*x1 - x2;
2*x6*x4 + 2*x5*x3 + 2*x4*x2 + x2^2 + 2*x3*x1 - x3;
2*x6*x3 + 2*x5*x2 + 2*x3*x2 + 2*x4*x1 - x4;
x3^2 + 2*x6*x1 + 2*x5*x1 + 2*x4*x1 - x5;
2*x6 + 2*x5 + 2*x4 + 2*x3 + 2*x2 + x1 - 1;
";

pub const NONGOR: &str = "\
# monomial ideal with a non-Gorenstein quotient; the only root is the origin
vars x1 x2;
x1^2;
x2^2;
x1*x2;
";

pub const CIRCLE: &str = "\
# infinitely many complex zeros, one real point
vars x1 x2;
x1^2 + x2^2;
";

pub const UNI_TWO_POINTS: &str = "\
vars x1;
x1^2 - 1;
";

pub const UNI_ONE_POINT: &str = "\
vars x1;
x1 - 1;
";

pub const EMPTY_UNIVARIATE: &str = "\
# no real roots
vars x1;
x1^2 + 1;
";

pub const EMPTY_CIRCLE: &str = "\
# no real roots
vars x1 x2;
x1^2 + x2^2 + 1;
";

pub fn entries() -> Vec<BenchEntry> {
    vec![
        BenchEntry {
            name: "cox98",
            blurb: "3 vars, 8 complex roots, 2 real",
            source: COX98,
            expect: Expected::Solved { t: 5, s: 2, roots: 2 },
        },
        BenchEntry {
            name: "cox98-posdim",
            blurb: "cox98 scaled to a positive-dimensional complex variety",
            source: COX98_POSDIM,
            expect: Expected::Solved { t: 7, s: 2, roots: 2 },
        },
        BenchEntry {
            name: "cox3",
            blurb: "2 vars, one 8-fold root and one simple root",
            source: COX3,
            expect: Expected::Solved { t: 6, s: 2, roots: 2 },
        },
        BenchEntry {
            name: "gauss",
            blurb: "Gaussian quadrature, 2 real roots",
            source: GAUSS,
            expect: Expected::Solved { t: 5, s: 2, roots: 2 },
        },
        BenchEntry {
            name: "katsura5",
            blurb: "6 vars, 32 complex roots, 12 real",
            source: KATSURA5,
            expect: Expected::Solved { t: 6, s: 3, roots: 12 },
        },
        BenchEntry {
            name: "nongor",
            blurb: "non-Gorenstein monomial ideal, root at the origin",
            source: NONGOR,
            expect: Expected::Solved { t: 2, s: 1, roots: 1 },
        },
        BenchEntry {
            name: "circle",
            blurb: "x1^2 + x2^2: infinite complex variety, one real point",
            source: CIRCLE,
            expect: Expected::Solved { t: 2, s: 1, roots: 1 },
        },
        BenchEntry {
            name: "uni2",
            blurb: "x^2 - 1",
            source: UNI_TWO_POINTS,
            expect: Expected::Solved { t: 2, s: 2, roots: 2 },
        },
        BenchEntry {
            name: "empty1",
            blurb: "x^2 + 1 (empty real variety)",
            source: EMPTY_UNIVARIATE,
            expect: Expected::EmptyBy { t: 4 },
        },
        BenchEntry {
            name: "empty2",
            blurb: "x1^2 + x2^2 + 1 (empty real variety)",
            source: EMPTY_CIRCLE,
            expect: Expected::EmptyBy { t: 4 },
        },
    ]
}

pub fn by_name(name: &str) -> Option<BenchEntry> {
    entries().into_iter().find(|e| e.name == name)
}

pub fn system(name: &str) -> Option<PolySystem> {
    by_name(name).map(|e| parse_system(e.source).expect("corpus entries parse"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_parses() {
        for entry in entries() {
            let sys = parse_system(entry.source)
                .unwrap_or_else(|e| panic!("{} failed to parse: {}", entry.name, e));
            assert!(!sys.generators().is_empty());
        }
    }

    #[test]
    fn katsura_shape() {
        let sys = system("katsura5").unwrap();
        assert_eq!(sys.num_vars(), 6);
        assert_eq!(sys.generators().len(), 6);
        assert_eq!(sys.max_degree(), 2);
    }

    #[test]
    fn posdim_matches_scaled_base() {
        // the stored expansion equals h_i * (1 + x1^2 + x2^2 + x3^2)
        use realvar_core::poly::Monomial;
        use realvar_core::Polynomial;
        let base = system("cox98").unwrap();
        let blow = Polynomial::from_terms(
            3,
            [
                (Monomial::new(vec![0, 0, 0]), 1.0),
                (Monomial::new(vec![2, 0, 0]), 1.0),
                (Monomial::new(vec![0, 2, 0]), 1.0),
                (Monomial::new(vec![0, 0, 2]), 1.0),
            ],
        );
        let scaled = system("cox98-posdim").unwrap();
        for (h, s) in base.generators().iter().zip(scaled.generators()) {
            let expect = h.mul(&blow);
            assert_eq!(&expect, s);
        }
    }
}
