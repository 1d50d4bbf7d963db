//! Small string helpers shared by the parser, the matchers and the evaluator.

/// Collapses every run of whitespace into a single space and trims the ends.
pub fn normalize_whitespace(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

/// Normalization used when comparing a ground-truth sentence with a
/// segmented one: whitespace collapse, typographic quotes folded to ASCII,
/// trailing punctuation removed.
pub fn normalize_for_match(s: &str) -> String {
    let folded: String = s
        .chars()
        .map(|c| match c {
            '\u{2018}' | '\u{2019}' => '\'',
            '\u{201c}' | '\u{201d}' => '"',
            other => other,
        })
        .collect();
    let collapsed = normalize_whitespace(&folded);
    collapsed
        .trim_end_matches(|c: char| c.is_ascii_punctuation() && c != ')' || c.is_whitespace())
        .to_string()
}

/// Lowercases and folds curly apostrophes so that "can’t" matches "can't".
pub fn fold_for_matching(s: &str) -> String {
    normalize_whitespace(s)
        .chars()
        .map(|c| match c {
            '\u{2018}' | '\u{2019}' => '\'',
            other => other,
        })
        .collect::<String>()
        .to_lowercase()
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// True when `phrase` occurs in `haystack` with no word character directly
/// before or after the occurrence. Both arguments must already be folded
/// with [`fold_for_matching`].
pub fn contains_bounded(haystack: &str, phrase: &str) -> bool {
    if phrase.is_empty() {
        return false;
    }
    let starts_word = phrase.chars().next().is_some_and(is_word_char);
    let ends_word = phrase.chars().next_back().is_some_and(is_word_char);
    let mut from = 0;
    while let Some(pos) = haystack[from..].find(phrase) {
        let start = from + pos;
        let end = start + phrase.len();
        let before_ok = !starts_word || haystack[..start].chars().next_back().is_none_or(|c| !is_word_char(c));
        let after_ok = !ends_word || haystack[end..].chars().next().is_none_or(|c| !is_word_char(c));
        if before_ok && after_ok {
            return true;
        }
        // advance by one character
        from = start + haystack[start..].chars().next().map_or(1, char::len_utf8);
    }
    false
}

/// Count of alphanumeric runs, so "for-loops" counts as two words.
pub fn word_count(s: &str) -> usize {
    s.split(|c: char| !c.is_alphanumeric()).filter(|w| !w.is_empty()).count()
}

/// Strips reply/forward prefixes and list tags from a subject line and
/// lowercases it, so replies compare equal to the message they answer.
pub fn normalize_subject(subject: &str) -> String {
    let mut s = subject.trim().to_string();
    loop {
        let before = s.clone();
        let trimmed = s.trim_start();
        if trimmed.starts_with('[') {
            if let Some(close) = trimmed.find(']') {
                s = trimmed[close + 1..].to_string();
                continue;
            }
        }
        let lower = trimmed.to_ascii_lowercase();
        for prefix in ["re:", "fwd:", "fw:", "aw:", "re :"] {
            if lower.starts_with(prefix) {
                s = trimmed[prefix.len()..].to_string();
                break;
            }
        }
        if s == before {
            break;
        }
    }
    normalize_whitespace(&s).to_lowercase()
}
