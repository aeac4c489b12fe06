//! Classification of ternary codes by the three ways a sequence can behave:
//! infinitely many `{0,2}`-blocks ending in 2 after some point, an all-zero
//! tail, or an occurrence of a pattern `{1,2} 0^{n−2} 1`.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroDeuxCase {
    /// The prefix ends inside a `{0,2}` tail whose last digit is 2.
    Case1,
    /// The prefix ends inside an all-zero tail.
    Case2,
    /// A pattern `{1,2} 0^{n−2} 1` occurs; this is decided by the prefix.
    Case3,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroDeux {
    pub case: ZeroDeuxCase,
    /// `(N, n)`: the relevant block is `ω_{N+1} … ω_{N+n}` (1-based).
    pub witness: Option<(usize, usize)>,
}

/// Earliest occurrence of `{1,2} 0^{n−2} 1`, as `(N, n)`.
pub fn find_case3(code: &[u8]) -> Option<(usize, usize)> {
    find_case3_from(code, 0)
}

/// Earliest occurrence starting at 0-based index `N ≥ from`.
pub fn find_case3_from(code: &[u8], from: usize) -> Option<(usize, usize)> {
    // scanning ends of patterns left to right finds the earliest end; each 1
    // closes at most the pattern starting at the last nonzero digit before it
    let mut last_nonzero: Option<usize> = None;
    for (j, &c) in code.iter().enumerate() {
        if c == 1 {
            if let Some(s) = last_nonzero {
                if s >= from {
                    return Some((s, j - s + 1));
                }
            }
        }
        if c != 0 {
            last_nonzero = Some(j);
        }
    }
    None
}

pub fn zerodeux_classify(prefix: &[u8]) -> ZeroDeux {
    if let Some(w) = find_case3(prefix) {
        return ZeroDeux { case: ZeroDeuxCase::Case3, witness: Some(w) };
    }
    let after_last_one = prefix.iter().rposition(|&c| c == 1).map_or(0, |i| i + 1);
    match prefix.last() {
        Some(2) => {
            ZeroDeux { case: ZeroDeuxCase::Case1, witness: Some((after_last_one, prefix.len() - after_last_one)) }
        }
        Some(0) => {
            let after_last_nonzero = prefix.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1);
            ZeroDeux {
                case: ZeroDeuxCase::Case2,
                witness: Some((after_last_nonzero, prefix.len() - after_last_nonzero)),
            }
        }
        _ => ZeroDeux { case: ZeroDeuxCase::Undetermined, witness: None },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(zerodeux_classify(&[1, 1]), ZeroDeux { case: ZeroDeuxCase::Case3, witness: Some((0, 2)) });
        assert_eq!(zerodeux_classify(&[0; 8]), ZeroDeux { case: ZeroDeuxCase::Case2, witness: Some((0, 8)) });
        assert_eq!(zerodeux_classify(&[2, 0, 2, 0, 2]), ZeroDeux { case: ZeroDeuxCase::Case1, witness: Some((0, 5)) });
        assert_eq!(zerodeux_classify(&[0, 2, 0, 0, 1]).witness, Some((1, 4)));
        assert_eq!(zerodeux_classify(&[0, 0, 1]).case, ZeroDeuxCase::Undetermined);
        assert_eq!(zerodeux_classify(&[1, 2, 0]), ZeroDeux { case: ZeroDeuxCase::Case2, witness: Some((2, 1)) });
        assert_eq!(zerodeux_classify(&[]).case, ZeroDeuxCase::Undetermined);
    }

    #[test]
    fn matches_brute_force() {
        fn brute(code: &[u8]) -> Option<(usize, usize)> {
            let mut best: Option<(usize, usize)> = None;
            for s in 0..code.len() {
                for e in s + 1..code.len() {
                    let ok = code[s] != 0 && code[e] == 1 && code[s + 1..e].iter().all(|&c| c == 0);
                    if ok && best.is_none_or(|(bs, bn)| e < bs + bn - 1) {
                        best = Some((s, e - s + 1));
                    }
                }
            }
            best
        }
        let mut code = vec![0u8; 7];
        for idx in 0..3usize.pow(7) {
            let mut x = idx;
            for c in code.iter_mut() {
                *c = (x % 3) as u8;
                x /= 3;
            }
            assert_eq!(find_case3(&code), brute(&code), "{code:?}");
        }
    }
}
