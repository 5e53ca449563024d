//! Saving a compiled matcher together with its signature and loading it back.

use termmatch::cli::parse_pattern;
use termmatch::many_to_one::persist;
use termmatch::signature_file::parse_signature;
use termmatch::{parse_term, ManyToOneMatcher};

fn main() {
    let reg = parse_signature("op Plus variadic associative commutative\nclass Num\nsymbol one two : Num\n").unwrap();
    let matcher = ManyToOneMatcher::from_patterns(
        ["Plus(x_, x_, rest___)", "Plus(n_:Num, m___) | len(m) >= 1", "list(a_, b_) | a < b"]
            .map(|src| parse_pattern(src, &reg).unwrap()),
    );

    let bytes = persist::to_bytes(&matcher, &reg).unwrap();
    println!("{} bytes, header {:?}", bytes.len(), String::from_utf8_lossy(&bytes[..6]));

    let (reg2, loaded) = persist::from_bytes(&bytes).unwrap();
    for subject in ["Plus(one, two, two)", "list(1, 2)"] {
        let t = parse_term(subject, &reg2).unwrap();
        let before = matcher.matches(&parse_term(subject, &reg).unwrap()).unwrap();
        let after = loaded.matches(&t).unwrap();
        assert_eq!(before, after);
        for (i, s) in after {
            println!("{subject}: {i} with {s}");
        }
    }

    let mut corrupt = bytes.clone();
    corrupt.truncate(bytes.len() / 2);
    println!("truncated: {}", persist::from_bytes(&corrupt).unwrap_err());
}
