use unicode_normalization::UnicodeNormalization;

/// NFC, lower-case, trimmed, internal whitespace collapsed to one space.
pub fn normalize_alias(s: &str) -> String {
    let nfc: String = s.nfc().collect();
    nfc.to_lowercase().split_whitespace().collect::<Vec<_>>().join(" ")
}

/// A lower-cased word token with its byte range in the source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordToken {
    pub start: usize,
    pub end: usize,
    pub text: String,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '’' | '-')
}

/// Word tokens: runs of letters, digits and `_`, with apostrophes or hyphens allowed
/// between word characters. Sigils such as `#` and `@` are never part of a token.
pub fn word_tokens(text: &str) -> Vec<WordToken> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if !is_word_char(chars[i].1) {
            i += 1;
            continue;
        }
        let start = i;
        let mut j = i + 1;
        while j < chars.len() {
            let c = chars[j].1;
            if is_word_char(c) {
                j += 1;
            } else if is_joiner(c) && j + 1 < chars.len() && is_word_char(chars[j + 1].1) {
                j += 2;
            } else {
                break;
            }
        }
        let b_start = chars[start].0;
        let b_end = chars.get(j).map_or(text.len(), |&(b, _)| b);
        out.push(WordToken {
            start: b_start,
            end: b_end,
            text: normalize_alias(&text[b_start..b_end]),
        });
        i = j;
    }
    out
}

/// Lookup key of a phrase: its word tokens joined by single spaces.
pub fn phrase_key(s: &str) -> String {
    word_tokens(s).into_iter().map(|t| t.text).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        assert_eq!(normalize_alias("  Boris\t  JOHNSON "), "boris johnson");
        // decomposed e + combining acute becomes the composed form
        assert_eq!(normalize_alias("Jose\u{301}"), "jos\u{e9}");
    }

    #[test]
    fn tokens_strip_sigils_and_keep_spans() {
        let text = "Vote #UKIP, @Nigel_Farage! Rees-Mogg's view";
        let toks = word_tokens(text);
        let words: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(words, ["vote", "ukip", "nigel_farage", "rees-mogg's", "view"]);
        assert_eq!(&text[toks[1].start..toks[1].end], "UKIP");
    }

    #[test]
    fn phrase_keys() {
        assert_eq!(phrase_key("Liberal  Democrats."), "liberal democrats");
        assert_eq!(phrase_key("!!"), "");
    }
}
