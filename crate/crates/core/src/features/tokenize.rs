use std::sync::OnceLock;

use regex::Regex;

fn token_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"(?x)
            (?P<url>(?:https?://|www\.)\S+)
          | (?P<tag>[\#@][\p{L}\p{N}_]+)
          | (?P<word>[\p{L}\p{N}_]+(?:['’-][\p{L}\p{N}_]+)*)
          | (?P<punct>[^\s\p{L}\p{N}_])
            ",
        )
        .expect("valid token regex")
    })
}

/// Lower-cased tokens. URLs become `URL`, hashtags and mentions keep their sigil, and
/// every other non-space symbol is its own token.
pub fn tokenize(text: &str) -> Vec<String> {
    token_regex()
        .captures_iter(text)
        .map(|c| {
            if c.name("url").is_some() {
                "URL".to_string()
            } else {
                c[0].to_lowercase()
            }
        })
        .collect()
}

/// `text` with URLs removed, for character-level counts that should not see URL syntax.
pub(crate) fn strip_urls(text: &str) -> std::borrow::Cow<'_, str> {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?:https?://|www\.)\S+").expect("valid url regex"))
        .replace_all(text, "")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules() {
        assert_eq!(tokenize("Vote #Brexit NOW!"), ["vote", "#brexit", "now", "!"]);
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("@user http://x.y"), ["@user", "URL"]);
        assert_eq!(tokenize("Go!! don't"), ["go", "!", "!", "don't"]);
        assert_eq!(tokenize("www.bbc.co.uk, ok"), ["URL", "ok"]);
    }

    #[test]
    fn url_stripping() {
        assert_eq!(strip_urls("a. https://t.co/x b."), "a.  b.");
    }
}
