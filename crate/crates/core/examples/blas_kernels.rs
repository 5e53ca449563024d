//! Finding the subexpressions of a matrix product that a triangular
//! matrix multiply kernel can compute. Symbols and their properties come
//! from a signature file.

use termmatch::constraint_expr::parse_constraint;
use termmatch::signature_file::parse_signature;
use termmatch::{one_to_one, parse_term, ManyToOneMatcher, Pattern};

const SIGNATURE: &str = "
# matrix operations
op Times variadic associative
op Plus variadic associative commutative
op Transpose 1
class Matrix
symbol M1 M2 : Matrix
symbol M3 : Matrix triangular
";

fn main() {
    let reg = parse_signature(SIGNATURE).unwrap();
    let triangular = parse_constraint("has_property(A, \"triangular\")").unwrap();
    let patterns: Vec<Pattern> = [
        "Times(h___, A_:Matrix, B_:Matrix, t___)",
        "Times(h___, Transpose(A_:Matrix), B_:Matrix, t___)",
        "Times(h___, B_:Matrix, A_:Matrix, t___)",
        "Times(h___, B_:Matrix, Transpose(A_:Matrix), t___)",
    ]
    .iter()
    .map(|src| Pattern::new(parse_term(src, &reg).unwrap()).unwrap().with_constraint(triangular.clone()).unwrap())
    .collect();

    let expr = parse_term("Times(Transpose(M3), M1, M3, M2)", &reg).unwrap();
    println!("one pattern at a time:");
    for (i, p) in patterns.iter().enumerate() {
        for sigma in one_to_one::matches(&expr, p).unwrap() {
            println!("    {i} with {sigma}");
        }
    }
    println!("all patterns at once:");
    let matcher = ManyToOneMatcher::from_patterns(patterns);
    for (i, sigma) in matcher.matches(&expr).unwrap() {
        println!("    {i} with {sigma}");
    }
}
