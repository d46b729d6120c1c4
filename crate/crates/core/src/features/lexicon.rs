use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Term → score table loaded from a `term<TAB>score` or `term<TAB>p<TAB>a<TAB>i` file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub enum Lexicon<T> {
    Polarity {
        name: String,
        entries: BTreeMap<String, T>,
    },
    /// Pleasantness, activation and imagery per term.
    Dimensional {
        name: String,
        entries: BTreeMap<String, [T; 3]>,
    },
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim_end_matches('\r');
        if l.trim().is_empty() || l.trim_start().starts_with('#') {
            None
        } else {
            Some((i + 1, l.split('\t').collect()))
        }
    })
}

fn number<T: Scalar>(name: &str, line: usize, s: &str) -> Result<T> {
    s.trim().parse::<f64>().map(T::of).map_err(|e| Error::Malformed {
        file: name.to_string(),
        line,
        message: format!("bad score `{s}`: {e}"),
    })
}

impl<T: Scalar> Lexicon<T> {
    pub fn parse_polarity(name: &str, text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (line, cols) in data_lines(text) {
            if cols.len() != 2 {
                return Err(Error::Malformed {
                    file: name.to_string(),
                    line,
                    message: "expected `term<TAB>score`".into(),
                });
            }
            entries.insert(cols[0].trim().to_lowercase(), number(name, line, cols[1])?);
        }
        Ok(Lexicon::Polarity {
            name: name.to_string(),
            entries,
        })
    }

    pub fn parse_dimensional(name: &str, text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (line, cols) in data_lines(text) {
            if cols.len() != 4 {
                return Err(Error::Malformed {
                    file: name.to_string(),
                    line,
                    message: "expected `term<TAB>p<TAB>a<TAB>i`".into(),
                });
            }
            let v = [
                number(name, line, cols[1])?,
                number(name, line, cols[2])?,
                number(name, line, cols[3])?,
            ];
            entries.insert(cols[0].trim().to_lowercase(), v);
        }
        Ok(Lexicon::Dimensional {
            name: name.to_string(),
            entries,
        })
    }

    pub fn name(&self) -> &str {
        match self {
            Lexicon::Polarity { name, .. } | Lexicon::Dimensional { name, .. } => name,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Lexicon::Polarity { entries, .. } => entries.len(),
            Lexicon::Dimensional { entries, .. } => entries.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn polarity(&self, term: &str) -> Option<T> {
        match self {
            Lexicon::Polarity { entries, .. } => entries.get(term).copied(),
            Lexicon::Dimensional { .. } => None,
        }
    }

    pub fn dimensions(&self, term: &str) -> Option<[T; 3]> {
        match self {
            Lexicon::Dimensional { entries, .. } => entries.get(term).copied(),
            Lexicon::Polarity { .. } => None,
        }
    }

    fn is_polarity(&self) -> bool {
        matches!(self, Lexicon::Polarity { .. })
    }
}

/// The four lexicon roles used by the sentiment features.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LexiconSet<T> {
    /// Integer valence; contributes its score.
    pub afinn: Option<Lexicon<T>>,
    /// Positive/negative word list; contributes ±1.
    pub huliu: Option<Lexicon<T>>,
    /// Positive/negative emotion categories; contributes ±1.
    pub liwc: Option<Lexicon<T>>,
    /// Pleasantness, activation, imagery.
    pub dal: Option<Lexicon<T>>,
}

pub const LEXICON_ROLES: [&str; 4] = ["afinn", "huliu", "liwc", "dal"];

const BUILTIN: [(&str, &str); 4] = [
    ("afinn", include_str!("../../data/lexica/afinn.tsv")),
    ("huliu", include_str!("../../data/lexica/huliu.tsv")),
    ("liwc", include_str!("../../data/lexica/liwc.tsv")),
    ("dal", include_str!("../../data/lexica/dal.tsv")),
];

impl<T: Scalar> LexiconSet<T> {
    /// Small stand-in lexica bundled with the crate.
    pub fn builtin() -> Self {
        let mut set = LexiconSet::default();
        for (role, text) in BUILTIN {
            set.set_role(role, text).expect("bundled lexica parse");
        }
        set
    }

    /// Raw TSV text of the bundled lexica, keyed by role.
    pub fn builtin_sources() -> [(&'static str, &'static str); 4] {
        BUILTIN
    }

    fn set_role(&mut self, role: &str, text: &str) -> Result<()> {
        match role {
            "afinn" => self.afinn = Some(Lexicon::parse_polarity(role, text)?),
            "huliu" => self.huliu = Some(Lexicon::parse_polarity(role, text)?),
            "liwc" => self.liwc = Some(Lexicon::parse_polarity(role, text)?),
            "dal" => self.dal = Some(Lexicon::parse_dimensional(role, text)?),
            other => return Err(Error::Features(format!("unknown lexicon role `{other}`"))),
        }
        Ok(())
    }

    /// Loads `afinn.tsv`, `huliu.tsv`, `liwc.tsv` and `dal.tsv` from `dir`; missing files
    /// leave their role empty.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let mut set = LexiconSet::default();
        for role in LEXICON_ROLES {
            let path = dir.join(format!("{role}.tsv"));
            if path.exists() {
                let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                set.set_role(role, &text).map_err(|e| match e {
                    Error::Malformed { line, message, .. } => Error::Malformed {
                        file: path.display().to_string(),
                        line,
                        message,
                    },
                    other => other,
                })?;
            }
        }
        Ok(set)
    }

    pub fn is_complete(&self) -> bool {
        self.missing_role().is_none()
    }

    fn missing_role(&self) -> Option<&'static str> {
        [
            ("afinn", self.afinn.as_ref().map(Lexicon::is_polarity)),
            ("huliu", self.huliu.as_ref().map(Lexicon::is_polarity)),
            ("liwc", self.liwc.as_ref().map(Lexicon::is_polarity)),
            ("dal", self.dal.as_ref().map(|l| !l.is_polarity())),
        ]
        .into_iter()
        .find(|(_, ok)| *ok != Some(true))
        .map(|(r, _)| r)
    }
}

/// Six sentiment sums over `tokens`: AFINN valence, Hu&Liu ±1, LIWC ±1, then DAL
/// pleasantness, activation and imagery.
pub fn sentiment_features<T: Scalar>(tokens: &[String], lexica: &LexiconSet<T>) -> Result<[T; 6]> {
    if let Some(role) = lexica.missing_role() {
        return Err(Error::MissingLexicon(role));
    }
    let (afinn, huliu, liwc, dal) = (
        lexica.afinn.as_ref().unwrap(),
        lexica.huliu.as_ref().unwrap(),
        lexica.liwc.as_ref().unwrap(),
        lexica.dal.as_ref().unwrap(),
    );
    let sign = |v: T| {
        if v > T::zero() {
            T::one()
        } else if v < T::zero() {
            -T::one()
        } else {
            T::zero()
        }
    };
    let mut out = [T::zero(); 6];
    for tok in tokens {
        if let Some(v) = afinn.polarity(tok) {
            out[0] += v;
        }
        if let Some(v) = huliu.polarity(tok) {
            out[1] += sign(v);
        }
        if let Some(v) = liwc.polarity(tok) {
            out[2] += sign(v);
        }
        if let Some([p, a, i]) = dal.dimensions(tok) {
            out[3] += p;
            out[4] += a;
            out[5] += i;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    fn set(afinn: &str, huliu: &str) -> LexiconSet<f64> {
        LexiconSet {
            afinn: Some(Lexicon::parse_polarity("afinn", afinn).unwrap()),
            huliu: Some(Lexicon::parse_polarity("huliu", huliu).unwrap()),
            liwc: Some(Lexicon::parse_polarity("liwc", "").unwrap()),
            dal: Some(Lexicon::parse_dimensional("dal", "").unwrap()),
        }
    }

    #[test]
    fn huliu_hit() {
        let s = set("", "good\t1\n");
        assert_eq!(
            sentiment_features(&toks(&["good"]), &s).unwrap(),
            [0.0, 1.0, 0.0, 0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn no_hits_is_zero() {
        let s = LexiconSet::<f64>::builtin();
        assert_eq!(sentiment_features(&toks(&["zzz", "qqq"]), &s).unwrap(), [0.0; 6]);
    }

    #[test]
    fn afinn_cancels() {
        let s = set("good\t3\nbad\t-3\n", "");
        // hand lookup: +3 + (-3) = 0
        assert_eq!(sentiment_features(&toks(&["good", "bad"]), &s).unwrap()[0], 0.0);
    }

    #[test]
    fn signs_not_magnitudes_for_word_lists() {
        let s = set("", "good\t5\nbad\t-0.5\n");
        let v = sentiment_features(&toks(&["good", "bad", "bad"]), &s).unwrap();
        assert_eq!(v[1], -1.0);
    }

    #[test]
    fn dal_sums() {
        let s = LexiconSet::<f64>::builtin();
        let v = sentiment_features(&toks(&["happy", "vote"]), &s).unwrap();
        assert!((v[3] - 5.0).abs() < 1e-12);
        assert!((v[4] - 4.2).abs() < 1e-12);
        assert!((v[5] - 3.5).abs() < 1e-12);
    }

    #[test]
    fn missing_role_is_an_error() {
        let mut s = LexiconSet::<f64>::builtin();
        s.liwc = None;
        assert!(matches!(
            sentiment_features(&toks(&["a"]), &s),
            Err(Error::MissingLexicon("liwc"))
        ));
        let mut s = LexiconSet::<f64>::builtin();
        s.dal = Some(Lexicon::parse_polarity("dal", "a\t1").unwrap());
        assert!(matches!(
            sentiment_features(&toks(&["a"]), &s),
            Err(Error::MissingLexicon("dal"))
        ));
    }

    #[test]
    fn malformed_lines() {
        assert!(Lexicon::<f64>::parse_polarity("x", "# c\ngood\tnope\n").is_err());
        match Lexicon::<f64>::parse_dimensional("x", "a\t1\t2\t3\nb\t1\n") {
            Err(Error::Malformed { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn loads_from_directory() {
        let dir = tempfile::tempdir().unwrap();
        for (role, text) in LexiconSet::<f64>::builtin_sources() {
            std::fs::write(dir.path().join(format!("{role}.tsv")), text).unwrap();
        }
        assert_eq!(LexiconSet::<f64>::load_dir(dir.path()).unwrap(), LexiconSet::builtin());
    }

    proptest! {
        #[test]
        fn additive_over_concatenation(
            a in proptest::collection::vec(0usize..8, 0..12),
            b in proptest::collection::vec(0usize..8, 0..12),
        ) {
            let words = ["good", "bad", "happy", "fear", "vote", "zzz", "crash", "hope"];
            let s = LexiconSet::<f64>::builtin();
            let ta: Vec<String> = a.iter().map(|&i| words[i].to_string()).collect();
            let tb: Vec<String> = b.iter().map(|&i| words[i].to_string()).collect();
            let mut both = ta.clone();
            both.extend(tb.iter().cloned());
            let va = sentiment_features(&ta, &s).unwrap();
            let vb = sentiment_features(&tb, &s).unwrap();
            let vab = sentiment_features(&both, &s).unwrap();
            for k in 0..6 {
                prop_assert!((va[k] + vb[k] - vab[k]).abs() < 1e-9);
            }
        }
    }
}
