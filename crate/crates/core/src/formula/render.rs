//! Printing for both languages.
//!
//! Brackets are minimal under the parser's precedence table, except that a
//! binary operand of `=>`, `->` or `<->` is always bracketed, so
//! `~(p | q) => (~q ^ ~p)` prints the way the axiom lists are usually typeset.

use std::fmt;

use super::{DiscursiveFormula, ModalFormula};

enum Shape<'a, T> {
    Leaf(String),
    Unary(&'static str, &'a T),
    Binary {
        op: &'static str,
        level: u8,
        right_assoc: bool,
        lhs: &'a T,
        rhs: &'a T,
    },
}

fn bin<'a, T>(op: &'static str, level: u8, right_assoc: bool, lhs: &'a T, rhs: &'a T) -> Shape<'a, T> {
    Shape::Binary {
        op,
        level,
        right_assoc,
        lhs,
        rhs,
    }
}

trait Shaped: Sized {
    fn shape(&self) -> Shape<'_, Self>;
}

impl Shaped for DiscursiveFormula {
    fn shape(&self) -> Shape<'_, Self> {
        use DiscursiveFormula as F;
        match self {
            F::Atom(a) => Shape::Leaf(a.clone()),
            F::MetaVar(c) => Shape::Leaf(c.to_string()),
            F::Neg(x) => Shape::Unary("~", x),
            F::DConj(l, r) => bin("^", 4, false, l, r),
            F::Or(l, r) => bin("|", 3, false, l, r),
            F::DImp(l, r) => bin("=>", 2, true, l, r),
        }
    }
}

impl Shaped for ModalFormula {
    fn shape(&self) -> Shape<'_, Self> {
        use ModalFormula as M;
        match self {
            M::Atom(a) => Shape::Leaf(a.clone()),
            M::Neg(x) => Shape::Unary("~", x),
            M::Dia(x) => Shape::Unary("<>", x),
            M::Box(x) => Shape::Unary("[]", x),
            M::And(l, r) => bin("&", 4, false, l, r),
            M::Or(l, r) => bin("|", 3, false, l, r),
            M::Imp(l, r) => bin("->", 2, true, l, r),
            M::Iff(l, r) => bin("<->", 1, true, l, r),
        }
    }
}

fn binary_level<T: Shaped>(t: &T) -> Option<u8> {
    match t.shape() {
        Shape::Binary { level, .. } => Some(level),
        _ => None,
    }
}

fn write_child<T: Shaped>(f: &mut fmt::Formatter<'_>, child: &T, parens: bool) -> fmt::Result {
    if parens {
        f.write_str("(")?;
        write_shaped(f, child)?;
        f.write_str(")")
    } else {
        write_shaped(f, child)
    }
}

fn write_shaped<T: Shaped>(f: &mut fmt::Formatter<'_>, t: &T) -> fmt::Result {
    match t.shape() {
        Shape::Leaf(s) => f.write_str(&s),
        Shape::Unary(op, x) => {
            f.write_str(op)?;
            write_child(f, x, binary_level(x).is_some())
        }
        Shape::Binary {
            op,
            level,
            right_assoc,
            lhs,
            rhs,
        } => {
            // binary operands of an implication are always bracketed,
            // everywhere else brackets are minimal
            let implication = level <= 2;
            let left_parens = binary_level(lhs)
                .is_some_and(|l| implication || l < level || (l == level && right_assoc));
            let right_parens = binary_level(rhs)
                .is_some_and(|l| implication || l < level || (l == level && !right_assoc));
            write_child(f, lhs, left_parens)?;
            write!(f, " {op} ")?;
            write_child(f, rhs, right_parens)
        }
    }
}

impl fmt::Display for DiscursiveFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_shaped(f, self)
    }
}

impl fmt::Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_shaped(f, self)
    }
}

#[cfg(test)]
mod tests {
    use crate::formula::{parse_discursive, parse_modal, DiscursiveFormula as F};

    #[test]
    fn double_negation() {
        assert_eq!(F::neg(F::neg(F::atom("p"))).to_string(), "~~p");
    }

    #[test]
    fn ddk14_shape() {
        let f = F::dimp(
            F::neg(F::or(F::atom("p"), F::atom("q"))),
            F::dconj(F::neg(F::atom("q")), F::neg(F::atom("p"))),
        );
        assert_eq!(f.to_string(), "~(p | q) => (~q ^ ~p)");
    }

    #[test]
    fn associativity_parens() {
        for s in ["(p => q) => r", "p => (q => r)", "p | (q | r)", "p | q | r", "p ^ (q ^ r)", "~p | q"] {
            assert_eq!(parse_discursive(s).unwrap().to_string(), s);
        }
        for s in ["<>p -> q", "p & <>q", "(p <-> q) <-> r", "(p -> q) <-> <>r", "[]~(p | q)", "~<>~p"] {
            assert_eq!(parse_modal(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn render_is_idempotent_on_reparse() {
        let f = parse_discursive("((~(A)) | (B ^ C)) => (A)").unwrap();
        let once = f.to_string();
        assert_eq!(once, "(~A | B ^ C) => A");
        assert_eq!(parse_discursive(&once).unwrap().to_string(), once);
    }
}
