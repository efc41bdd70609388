use std::fmt;

use super::formula::Formula;
use super::parser::binary_precedence;

const UNARY: u8 = 6;
const ATOMIC: u8 = 7;

fn precedence(f: &Formula) -> u8 {
    use Formula::*;
    match f {
        True | False | Atom(_) => ATOMIC,
        Not(_) | Next(_) | Eventually(_) | Globally(_) | Release(..) => UNARY,
        Iff(..) => binary_precedence("<->").0,
        Implies(..) => binary_precedence("->").0,
        Or(..) => binary_precedence("|").0,
        And(..) => binary_precedence("&").0,
        Until(..) => binary_precedence("U").0,
    }
}

fn write_binary(f: &mut fmt::Formatter<'_>, op: &str, lhs: &Formula, rhs: &Formula) -> fmt::Result {
    let (prec, right_assoc) = binary_precedence(op);
    let (lp, rp) = (precedence(lhs), precedence(rhs));
    let left_parens = lp < prec || (lp == prec && right_assoc);
    let right_parens = rp < prec || (rp == prec && !right_assoc);
    write_operand(f, lhs, left_parens)?;
    write!(f, " {op} ")?;
    write_operand(f, rhs, right_parens)
}

fn write_operand(f: &mut fmt::Formatter<'_>, g: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({g})")
    } else {
        write!(f, "{g}")
    }
}

fn write_unary(f: &mut fmt::Formatter<'_>, op: &str, g: &Formula) -> fmt::Result {
    if precedence(g) < UNARY {
        write!(f, "{op}({g})")
    } else if op == "!" {
        write!(f, "!{g}")
    } else {
        write!(f, "{op} {g}")
    }
}

/// Canonical text with minimal parentheses under the parser's precedence
/// table. `Release` is printed through its until-dual.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            True => f.write_str("true"),
            False => f.write_str("false"),
            Atom(a) => f.write_str(a),
            Not(g) => write_unary(f, "!", g),
            Next(g) => write_unary(f, "X", g),
            Eventually(g) => write_unary(f, "F", g),
            Globally(g) => write_unary(f, "G", g),
            And(l, r) => write_binary(f, "&", l, r),
            Or(l, r) => write_binary(f, "|", l, r),
            Implies(l, r) => write_binary(f, "->", l, r),
            Iff(l, r) => write_binary(f, "<->", l, r),
            Until(l, r) => write_binary(f, "U", l, r),
            Release(l, r) => {
                let dual = Formula::until(Formula::not((**l).clone()), Formula::not((**r).clone()));
                write_unary(f, "!", &dual)
            }
        }
    }
}

/// Renders a formula as canonical text.
pub fn render(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn minimal_parentheses() {
        assert_eq!(
            render(&Formula::and(a("a"), Formula::or(a("b"), a("c")))),
            "a & (b | c)"
        );
        assert_eq!(
            render(&Formula::globally(Formula::implies(
                a("a"),
                Formula::eventually(a("b"))
            ))),
            "G(a -> F b)"
        );
        assert_eq!(
            render(&Formula::until(Formula::until(a("a"), a("b")), a("c"))),
            "(a U b) U c"
        );
        assert_eq!(render(&Formula::not(Formula::not(a("a")))), "!!a");
        assert_eq!(render(&Formula::next(Formula::globally(a("a")))), "X G a");
    }

    #[test]
    fn release_prints_through_dual() {
        let r = Formula::release(a("a"), a("b"));
        assert_eq!(render(&r), "!(!a U !b)");
        assert_eq!(
            parse(&render(&r)).unwrap(),
            Formula::not(Formula::until(Formula::not(a("a")), Formula::not(a("b"))))
        );
    }

    #[test]
    fn running_example_formulas_round_trip() {
        for text in [
            "F(straight_200m) & X(G(right_turn_Maple_St -> F(straight_500m & X(left_turn_Oak_St & F(straight_300m)))))",
            "G((straight_500m | right_turn) -> (right_turn -> straight_500m -> left_turn)) -> G(straight_1km & arrive_destination)",
        ] {
            let f = parse(text).unwrap();
            assert_eq!(parse(&render(&f)).unwrap(), f);
        }
    }
}
