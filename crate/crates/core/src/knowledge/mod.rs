//! Party/politician stance gazetteer and alias matching.
//!
//! Parties declare a campaign stance; politicians inherit the union of the stances of
//! every party they have been affiliated with, so a politician who changed party may
//! carry several stances.

mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::StanceLabel;

pub use text::{normalize_alias, phrase_key, word_tokens, WordToken};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Party,
    Politician,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyRecord {
    pub id: String,
    pub stance: StanceLabel,
    #[serde(default)]
    pub aliases: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoliticianRecord {
    pub id: String,
    #[serde(default)]
    pub parties: Vec<String>,
    #[serde(default)]
    pub aliases: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GazetteerEntry {
    pub alias: String,
    pub canonical: String,
    pub kind: EntityKind,
    pub stances: BTreeSet<StanceLabel>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GazetteerStats {
    pub parties: usize,
    pub party_aliases: usize,
    pub politicians: usize,
    pub politician_aliases: usize,
    pub multi_stance_politicians: usize,
    /// `(politician, party)` affiliations naming a party absent from the party table.
    pub unknown_affiliations: Vec<(String, String)>,
}

/// Alias → entity lookup table.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gazetteer {
    /// Keyed by the alias phrase key; several entries only for cross-kind collisions.
    entries: BTreeMap<String, Vec<GazetteerEntry>>,
    max_alias_tokens: usize,
    stats: GazetteerStats,
}

/// An alias occurrence in a text. `start..end` is a byte range into the matched text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityMatch {
    pub alias: String,
    pub canonical: String,
    pub kind: EntityKind,
    pub stances: BTreeSet<StanceLabel>,
    pub start: usize,
    pub end: usize,
}

impl Gazetteer {
    pub fn stats(&self) -> &GazetteerStats {
        &self.stats
    }

    pub fn lookup(&self, alias: &str) -> &[GazetteerEntry] {
        self.entries.get(&phrase_key(alias)).map_or(&[], Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &GazetteerEntry> + '_ {
        self.entries.values().flatten()
    }

    fn insert(&mut self, key: String, entry: GazetteerEntry) -> Result<()> {
        let slot = self.entries.entry(key.clone()).or_default();
        if let Some(existing) = slot.iter().find(|e| e.kind == entry.kind) {
            if existing.canonical != entry.canonical {
                return Err(Error::Gazetteer(format!(
                    "alias `{}` maps to both `{}` and `{}`",
                    key, existing.canonical, entry.canonical
                )));
            }
            return Ok(());
        }
        self.max_alias_tokens = self.max_alias_tokens.max(key.split(' ').count());
        slot.push(entry);
        slot.sort_by_key(|e| e.kind);
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, serde_json::to_string_pretty(self)? + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Gazetteer> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Compiles party and politician records into a gazetteer.
///
/// Input order does not matter: records are merged by id and processed sorted.
pub fn build_gazetteer(parties: &[PartyRecord], politicians: &[PoliticianRecord]) -> Result<Gazetteer> {
    let mut party_table: BTreeMap<&str, (StanceLabel, BTreeSet<String>)> = BTreeMap::new();
    for p in parties {
        let slot = party_table
            .entry(p.id.as_str())
            .or_insert_with(|| (p.stance, BTreeSet::new()));
        if slot.0 != p.stance {
            return Err(Error::Gazetteer(format!(
                "party `{}` declared with stances {} and {}",
                p.id, slot.0, p.stance
            )));
        }
        slot.1.extend(p.aliases.iter().map(|a| normalize_alias(a)));
    }

    let mut pol_table: BTreeMap<&str, (BTreeSet<&str>, BTreeSet<String>)> = BTreeMap::new();
    for p in politicians {
        let slot = pol_table.entry(p.id.as_str()).or_default();
        slot.0.extend(p.parties.iter().map(String::as_str));
        slot.1.extend(p.aliases.iter().map(|a| normalize_alias(a)));
    }

    let mut gaz = Gazetteer::default();
    let mut party_aliases = BTreeSet::new();
    for (id, (stance, aliases)) in &party_table {
        for alias in aliases {
            let key = phrase_key(alias);
            if key.is_empty() {
                log::warn!("party `{id}`: alias `{alias}` has no word characters, skipped");
                continue;
            }
            gaz.insert(
                key.clone(),
                GazetteerEntry {
                    alias: alias.clone(),
                    canonical: id.to_string(),
                    kind: EntityKind::Party,
                    stances: [*stance].into(),
                },
            )?;
            party_aliases.insert(key);
        }
    }

    let mut pol_aliases = BTreeSet::new();
    let mut multi = 0;
    let mut unknown = Vec::new();
    for (id, (affiliations, aliases)) in &pol_table {
        let mut stances = BTreeSet::new();
        for party in affiliations {
            match party_table.get(party) {
                Some((s, _)) => {
                    stances.insert(*s);
                }
                None => {
                    log::warn!("politician `{id}` affiliated with unknown party `{party}`");
                    unknown.push((id.to_string(), party.to_string()));
                    stances.insert(StanceLabel::None);
                }
            }
        }
        if stances.is_empty() {
            stances.insert(StanceLabel::None);
        }
        if stances.len() > 1 {
            multi += 1;
        }
        for alias in aliases {
            let key = phrase_key(alias);
            if key.is_empty() {
                log::warn!("politician `{id}`: alias `{alias}` has no word characters, skipped");
                continue;
            }
            gaz.insert(
                key.clone(),
                GazetteerEntry {
                    alias: alias.clone(),
                    canonical: id.to_string(),
                    kind: EntityKind::Politician,
                    stances: stances.clone(),
                },
            )?;
            pol_aliases.insert(key);
        }
    }

    gaz.stats = GazetteerStats {
        parties: party_table.len(),
        party_aliases: party_aliases.len(),
        politicians: pol_table.len(),
        politician_aliases: pol_aliases.len(),
        multi_stance_politicians: multi,
        unknown_affiliations: unknown,
    };
    Ok(gaz)
}

pub fn load_records<T: serde::de::DeserializeOwned>(path: impl AsRef<Path>) -> Result<Vec<T>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed {
        file: path.display().to_string(),
        line: e.line(),
        message: e.to_string(),
    })
}

/// Greedy left-to-right scan emitting the longest phrase found by `lookup` at each
/// position. Returns `(first_token, token_count)` pairs.
fn longest_matches<F>(tokens: &[WordToken], max_len: usize, mut lookup: F) -> Vec<(usize, usize)>
where
    F: FnMut(&str) -> bool,
{
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let longest = max_len.min(tokens.len() - i);
        let hit = (1..=longest).rev().find(|&len| {
            let key = tokens[i..i + len]
                .iter()
                .map(|t| t.text.as_str())
                .collect::<Vec<_>>()
                .join(" ");
            lookup(&key)
        });
        match hit {
            Some(len) => {
                out.push((i, len));
                i += len;
            }
            None => i += 1,
        }
    }
    out
}

/// Aliases mentioned in `text`, longest match first, case-insensitive, on word boundaries.
///
/// Match spans never overlap. An alias shared by a party and a politician yields one match
/// per entity, with identical spans.
pub fn match_entities(text: &str, gazetteer: &Gazetteer) -> Vec<EntityMatch> {
    if gazetteer.entries.is_empty() {
        return Vec::new();
    }
    let tokens = word_tokens(text);
    let hits = longest_matches(&tokens, gazetteer.max_alias_tokens, |k| {
        gazetteer.entries.contains_key(k)
    });
    let mut out = Vec::new();
    for (i, len) in hits {
        let key = tokens[i..i + len]
            .iter()
            .map(|t| t.text.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        for e in &gazetteer.entries[&key] {
            out.push(EntityMatch {
                alias: e.alias.clone(),
                canonical: e.canonical.clone(),
                kind: e.kind,
                stances: e.stances.clone(),
                start: tokens[i].start,
                end: tokens[i + len - 1].end,
            });
        }
    }
    out
}

/// Words that state a stance outright, e.g. `leave` and `remain`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StanceVocabulary(BTreeMap<String, StanceLabel>);

impl StanceVocabulary {
    pub fn new<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, StanceLabel)>,
        S: AsRef<str>,
    {
        let map: BTreeMap<String, StanceLabel> = words
            .into_iter()
            .map(|(w, l)| (phrase_key(w.as_ref()), l))
            .filter(|(k, _)| !k.is_empty())
            .collect();
        if map.is_empty() {
            return Err(Error::Gazetteer("stance vocabulary is empty".into()));
        }
        Ok(StanceVocabulary(map))
    }

    fn max_tokens(&self) -> usize {
        self.0.keys().map(|k| k.split(' ').count()).max().unwrap_or(1)
    }
}

impl Default for StanceVocabulary {
    fn default() -> Self {
        StanceVocabulary::new([("leave", StanceLabel::Leave), ("remain", StanceLabel::Remain)]).expect("non-empty")
    }
}

/// Distinct stances signalled by explicit stance words in `text`.
pub fn explicit_stance_words(text: &str, vocabulary: &StanceVocabulary) -> BTreeSet<StanceLabel> {
    let tokens = word_tokens(text);
    longest_matches(&tokens, vocabulary.max_tokens(), |k| vocabulary.0.contains_key(k))
        .into_iter()
        .map(|(i, len)| {
            let key = tokens[i..i + len]
                .iter()
                .map(|t| t.text.as_str())
                .collect::<Vec<_>>()
                .join(" ");
            vocabulary.0[&key]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use StanceLabel::{Leave as L, None as N, Remain as R};

    fn party(id: &str, stance: StanceLabel, aliases: &[&str]) -> PartyRecord {
        PartyRecord {
            id: id.into(),
            stance,
            aliases: aliases.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn pol(id: &str, parties: &[&str], aliases: &[&str]) -> PoliticianRecord {
        PoliticianRecord {
            id: id.into(),
            parties: parties.iter().map(|s| s.to_string()).collect(),
            aliases: aliases.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn sample() -> (Vec<PartyRecord>, Vec<PoliticianRecord>) {
        (
            vec![
                party("ukip", L, &["UKIP", "UK Independence Party"]),
                party("libdem", R, &["Lib Dems", "Liberal Democrats"]),
                party("con", N, &["Conservatives", "Tories"]),
            ],
            vec![
                pol("farron", &["libdem"], &["Tim Farron"]),
                pol("carswell", &["con", "ukip"], &["Douglas Carswell", "Carswell"]),
                pol("bj", &["con"], &["Boris", "Boris Johnson"]),
                pol("ghost", &["nowhere"], &["Ghost"]),
            ],
        )
    }

    #[test]
    fn inference_rules() {
        let (p, q) = sample();
        let g = build_gazetteer(&p, &q).unwrap();
        assert_eq!(g.lookup("tim farron")[0].stances, [R].into());
        assert_eq!(g.lookup("Carswell")[0].stances, [L, N].into());
        assert_eq!(g.lookup("ghost")[0].stances, [N].into());
        let s = g.stats();
        assert_eq!((s.parties, s.party_aliases), (3, 6));
        assert_eq!((s.politicians, s.politician_aliases), (4, 6));
        assert_eq!(s.multi_stance_politicians, 1);
        assert_eq!(s.unknown_affiliations, vec![("ghost".into(), "nowhere".into())]);
    }

    #[test]
    fn past_leave_current_remain() {
        let g = build_gazetteer(
            &[party("a", L, &["A party"]), party("b", R, &["B party"])],
            &[pol("x", &["a", "b"], &["X Person"])],
        )
        .unwrap();
        assert_eq!(g.lookup("x person")[0].stances, [L, R].into());
    }

    #[test]
    fn same_kind_alias_conflict_is_an_error() {
        let err = build_gazetteer(&[party("a", L, &["Alpha"]), party("b", R, &["alpha"])], &[]);
        assert!(err.is_err());
    }

    #[test]
    fn cross_kind_alias_reports_both() {
        let g = build_gazetteer(&[party("green", R, &["Green"])], &[pol("g", &["green"], &["Green"])]).unwrap();
        let m = match_entities("go green", &g);
        assert_eq!(m.len(), 2);
        assert_eq!((m[0].start, m[0].end), (m[1].start, m[1].end));
        assert_eq!(m[0].kind, EntityKind::Party);
    }

    #[test]
    fn matching() {
        let (p, q) = sample();
        let g = build_gazetteer(&p, &q).unwrap();
        let m = match_entities("vote with UKIP now", &g);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].kind, EntityKind::Party);
        assert_eq!(m[0].stances, [L].into());
        assert!(match_entities("no entities here", &g).is_empty());

        let text = "Boris Johnson and #Tories";
        let m = match_entities(text, &g);
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].canonical, "bj");
        assert_eq!(&text[m[0].start..m[0].end], "Boris Johnson");
        assert_eq!(&text[m[1].start..m[1].end], "Tories");
        assert!(match_entities("ukipper", &g).is_empty());
    }

    #[test]
    fn build_is_order_independent() {
        let (mut p, mut q) = sample();
        let a = build_gazetteer(&p, &q).unwrap();
        p.reverse();
        q.reverse();
        q.push(q[0].clone());
        let b = build_gazetteer(&p, &q).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn explicit_words() {
        let v = StanceVocabulary::default();
        assert_eq!(explicit_stance_words("I will vote leave", &v), [L].into());
        assert_eq!(
            explicit_stance_words("Leave means leave, not remain", &v),
            [L, R].into()
        );
        assert!(explicit_stance_words("believer", &v).is_empty());
        assert_eq!(explicit_stance_words("#Remain", &v), [R].into());
        assert!(StanceVocabulary::new(Vec::<(&str, StanceLabel)>::new()).is_err());
    }

    #[test]
    fn save_and_load() {
        let (p, q) = sample();
        let g = build_gazetteer(&p, &q).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gazetteer.json");
        g.save(&path).unwrap();
        assert_eq!(Gazetteer::load(&path).unwrap(), g);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn spans_never_overlap(words in proptest::collection::vec(0usize..6, 0..30)) {
                let vocab = ["boris", "johnson", "ukip", "lib", "dems", "xyz"];
                let text = words.iter().map(|&i| vocab[i]).collect::<Vec<_>>().join(" ");
                let (p, q) = sample();
                let g = build_gazetteer(&p, &q).unwrap();
                let m = match_entities(&text, &g);
                for w in m.windows(2) {
                    prop_assert!(w[0].end <= w[1].start || (w[0].start, w[0].end) == (w[1].start, w[1].end));
                }
            }

            #[test]
            fn shuffled_input_builds_the_same_gazetteer(rot_p in 0usize..3, rot_q in 0usize..4, swap in any::<bool>()) {
                let (p, q) = sample();
                let base = build_gazetteer(&p, &q).unwrap();
                let (mut p2, mut q2) = (p.clone(), q.clone());
                p2.rotate_left(rot_p);
                q2.rotate_left(rot_q);
                if swap { q2.swap(0, 3); }
                let g = build_gazetteer(&p2, &q2).unwrap();
                prop_assert_eq!(&g, &base);
                for e in g.entries().filter(|e| e.kind == EntityKind::Politician) {
                    let rec = q.iter().find(|r| r.id == e.canonical).unwrap();
                    let union: BTreeSet<StanceLabel> = rec.parties.iter()
                        .map(|pid| p.iter().find(|x| &x.id == pid).map_or(N, |x| x.stance))
                        .collect();
                    prop_assert!(e.stances.is_subset(&union));
                }
            }
        }
    }
}
