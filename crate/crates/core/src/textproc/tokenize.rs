//! Rule-based sentence splitting and word tokenization.

const TERMINATORS: &[char] = &['.', '!', '?'];
const CLOSERS: &[char] = &['"', '\'', ')', ']', '}', '\u{2019}', '\u{201D}'];

fn is_joiner(c: char) -> bool {
    matches!(c, '-' | '\'' | '\u{2019}')
}

/// Splits `text` into `(sentence_index, surface)` pairs.
///
/// Tokens are maximal runs of alphanumeric characters; a hyphen or apostrophe
/// stays inside a token when it sits between two alphanumerics. A sentence
/// ends at a run of `.`, `!` or `?` followed (after optional closing quotes or
/// brackets) by whitespace or end of text, except that a single `.` directly
/// after a one-letter token is treated as an initial or abbreviation.
pub fn tokenize(text: &str) -> Vec<(usize, String)> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut sentence = 0usize;
    let mut sentence_has_tokens = false;
    let mut current = String::new();

    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_alphanumeric() {
            current.push(c);
            i += 1;
            continue;
        }
        if is_joiner(c) && !current.is_empty() && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric()) {
            current.push(c);
            i += 1;
            continue;
        }

        // length in chars of a token ending right here
        let last_token_len = (!current.is_empty()).then(|| current.chars().count());
        if !current.is_empty() {
            out.push((sentence, std::mem::take(&mut current)));
            sentence_has_tokens = true;
        }

        if TERMINATORS.contains(&c) {
            let start = i;
            while i < chars.len() && TERMINATORS.contains(&chars[i]) {
                i += 1;
            }
            let run_len = i - start;
            let mut j = i;
            while j < chars.len() && CLOSERS.contains(&chars[j]) {
                j += 1;
            }
            let at_boundary = j >= chars.len() || chars[j].is_whitespace();
            let initial = run_len == 1 && c == '.' && last_token_len == Some(1);
            if at_boundary && !initial && sentence_has_tokens {
                sentence += 1;
                sentence_has_tokens = false;
            }
            i = j;
            continue;
        }
        i += 1;
    }
    if !current.is_empty() {
        out.push((sentence, current));
    }
    out
}
