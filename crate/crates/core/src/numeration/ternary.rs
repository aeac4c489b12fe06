//! The coding of admissible binary words by `w(0) = 00`, `w(1) = 010`,
//! `w(2) = 10`.

use super::words::{first_double_one, AdmissibleBinaryWord, TernaryCode};
use crate::error::{Error, Result};

pub const BLOCKS: [&[u8]; 3] = [&[0, 0], &[0, 1, 0], &[1, 0]];

/// Parses `word` greedily into blocks. Returns the code and the suffix that
/// is too short to decide (`"0"` or `"01"`, or empty).
pub fn encode3(word: &[u8]) -> Result<(TernaryCode, Vec<u8>)> {
    if let Some(position) = first_double_one(word) {
        return Err(Error::NotAdmissible { position });
    }
    if word.iter().any(|&d| d > 1) {
        return Err(Error::Domain("digits must be binary".into()));
    }
    let mut code = Vec::new();
    let mut i = 0;
    loop {
        let rest = &word[i..];
        let (symbol, used) = match rest {
            [1, 0, ..] => (2, 2),
            [0, 0, ..] => (0, 2),
            [0, 1, 0, ..] => (1, 3),
            _ => break,
        };
        code.push(symbol);
        i += used;
    }
    Ok((TernaryCode::new(code)?, word[i..].to_vec()))
}

pub fn decode3(code: &TernaryCode) -> AdmissibleBinaryWord {
    let digits: Vec<u8> = code.digits().iter().flat_map(|&c| BLOCKS[c as usize].iter().copied()).collect();
    AdmissibleBinaryWord::new(digits).expect("every block ends in 0")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeration::words::parse_digits;

    fn enc(s: &str) -> (Vec<u8>, Vec<u8>) {
        let (c, rest) = encode3(&parse_digits(s).unwrap()).unwrap();
        (c.digits().to_vec(), rest)
    }

    #[test]
    fn examples() {
        assert_eq!(enc("010010010"), (vec![1, 1, 1], vec![]));
        assert_eq!(enc("1000"), (vec![2, 0], vec![]));
        assert_eq!(enc("001001"), (vec![0, 2], vec![0, 1]));
        assert_eq!(decode3(&TernaryCode::parse("00").unwrap()).digits(), &[0, 0, 0, 0]);
        assert_eq!(decode3(&TernaryCode::parse("21").unwrap()).digits(), &[1, 0, 0, 1, 0]);
        assert!(matches!(encode3(&[0, 1, 1]), Err(Error::NotAdmissible { position: 2 })));
    }

    #[test]
    fn suffix_is_undecidable_remainder() {
        for w in AdmissibleBinaryWord::all_of_length(9) {
            let (code, rest) = encode3(w.digits()).unwrap();
            assert!(matches!(rest.as_slice(), [] | [0] | [0, 1] | [1]));
            let mut back = decode3(&code).into_inner();
            back.extend_from_slice(&rest);
            assert_eq!(back, w.digits());
        }
    }
}
