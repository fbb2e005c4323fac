//! Aggregated structural statistics: per-context mention indicators, unit
//! counts and per-term totals.
//!
//! Relational contexts keep, for each document unit, the set of terms in the
//! hypernym slot (`v_a`) and in the hyponym slot (`v_b`). General contexts
//! keep the nonzero `v_c` values per unit. Both are indexed in both
//! directions (term -> units and unit -> terms) so pairwise lookups and
//! whole-vocabulary sweeps are each a sparse walk.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::context::ids::{GeneralContext, RelationalContext};
use crate::error::{Error, Result};
use crate::ingest::vocab::{TermId, Vocabulary};

pub type UnitId = u32;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationalTable {
    units: u32,
    heads: BTreeMap<TermId, Vec<UnitId>>,
    items: BTreeMap<TermId, Vec<UnitId>>,
    heads_by_unit: Vec<Vec<TermId>>,
    items_by_unit: Vec<Vec<TermId>>,
}

impl RelationalTable {
    pub(crate) fn add_unit(&mut self, heads: &BTreeSet<TermId>, items: &BTreeSet<TermId>) -> UnitId {
        let unit = self.units;
        self.units += 1;
        for &t in heads {
            self.heads.entry(t).or_default().push(unit);
        }
        for &t in items {
            self.items.entry(t).or_default().push(unit);
        }
        self.heads_by_unit.push(heads.iter().copied().collect());
        self.items_by_unit.push(items.iter().copied().collect());
        unit
    }

    /// Number of document units `m_i`.
    pub fn units(&self) -> u32 {
        self.units
    }

    /// Units where `term` is in the hypernym slot, ascending.
    pub fn head_units(&self, term: TermId) -> &[UnitId] {
        self.heads.get(&term).map_or(&[], Vec::as_slice)
    }

    /// Units where `term` is in the hyponym slot, ascending.
    pub fn item_units(&self, term: TermId) -> &[UnitId] {
        self.items.get(&term).map_or(&[], Vec::as_slice)
    }

    pub fn heads_in(&self, unit: UnitId) -> &[TermId] {
        self.heads_by_unit.get(unit as usize).map_or(&[], Vec::as_slice)
    }

    pub fn items_in(&self, unit: UnitId) -> &[TermId] {
        self.items_by_unit.get(unit as usize).map_or(&[], Vec::as_slice)
    }

    /// `v_a^{i,j}(x)`.
    pub fn a(&self, unit: UnitId, term: TermId) -> u8 {
        self.heads_in(unit).binary_search(&term).is_ok() as u8
    }

    /// `v_b^{i,j}(y)`.
    pub fn b(&self, unit: UnitId, term: TermId) -> u8 {
        self.items_in(unit).binary_search(&term).is_ok() as u8
    }

    fn merge(&mut self, other: &RelationalTable) {
        let offset = self.units;
        for (&t, units) in &other.heads {
            self.heads.entry(t).or_default().extend(units.iter().map(|u| u + offset));
        }
        for (&t, units) in &other.items {
            self.items.entry(t).or_default().extend(units.iter().map(|u| u + offset));
        }
        self.heads_by_unit.extend(other.heads_by_unit.iter().cloned());
        self.items_by_unit.extend(other.items_by_unit.iter().cloned());
        self.units += other.units;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GeneralTable {
    units: u32,
    by_term: BTreeMap<TermId, Vec<(UnitId, i8)>>,
    by_unit: BTreeMap<UnitId, Vec<(TermId, i8)>>,
}

impl GeneralTable {
    pub(crate) fn set_unit(&mut self, unit: UnitId, values: &BTreeMap<TermId, i8>) {
        let entries: Vec<(TermId, i8)> = values.iter().filter(|(_, &v)| v != 0).map(|(&t, &v)| (t, v)).collect();
        if entries.is_empty() {
            return;
        }
        self.units += 1;
        for &(t, v) in &entries {
            self.by_term.entry(t).or_default().push((unit, v));
        }
        self.by_unit.insert(unit, entries);
    }

    /// Number of units where this cue fired for at least one term.
    pub fn units(&self) -> u32 {
        self.units
    }

    /// `v_c^{i,j}(x)`.
    pub fn c(&self, unit: UnitId, term: TermId) -> i8 {
        self.by_term
            .get(&term)
            .and_then(|v| v.binary_search_by_key(&unit, |e| e.0).ok().map(|k| v[k].1))
            .unwrap_or(0)
    }

    /// Nonzero `(unit, value)` pairs for `term`, ascending by unit.
    pub fn term_values(&self, term: TermId) -> &[(UnitId, i8)] {
        self.by_term.get(&term).map_or(&[], Vec::as_slice)
    }

    /// Nonzero `(term, value)` pairs in `unit`, ascending by term.
    pub fn unit_values(&self, unit: UnitId) -> &[(TermId, i8)] {
        self.by_unit.get(&unit).map_or(&[], Vec::as_slice)
    }

    /// Units where `term` scores +1.
    pub fn positive_count(&self, term: TermId) -> u64 {
        self.term_values(term).iter().filter(|e| e.1 > 0).count() as u64
    }

    fn merge(&mut self, other: &GeneralTable, offset: UnitId) {
        for (&t, vals) in &other.by_term {
            self.by_term
                .entry(t)
                .or_default()
                .extend(vals.iter().map(|&(u, v)| (u + offset, v)));
        }
        for (&u, vals) in &other.by_unit {
            self.by_unit.insert(u + offset, vals.clone());
        }
        self.units += other.units;
    }
}

/// Structural statistics over a vocabulary's term space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureStats {
    terms: Arc<Vec<String>>,
    index: Arc<HashMap<String, TermId>>,
    mentions: BTreeMap<TermId, u64>,
    section_title: BTreeMap<TermId, u64>,
    definition_text: BTreeMap<TermId, u64>,
    relational: Vec<RelationalTable>,
    general: Vec<GeneralTable>,
    general_units: u32,
    mention_units: BTreeMap<TermId, Vec<UnitId>>,
}

impl StructureStats {
    pub fn new(vocab: &Vocabulary) -> Self {
        let terms: Vec<String> = vocab.terms().to_vec();
        Self::with_terms(Arc::new(terms))
    }

    pub(crate) fn with_terms(terms: Arc<Vec<String>>) -> Self {
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as TermId))
            .collect();
        Self::with_shared(terms, Arc::new(index))
    }

    pub(crate) fn with_shared(terms: Arc<Vec<String>>, index: Arc<HashMap<String, TermId>>) -> Self {
        StructureStats {
            terms,
            index,
            mentions: BTreeMap::new(),
            section_title: BTreeMap::new(),
            definition_text: BTreeMap::new(),
            relational: vec![RelationalTable::default(); RelationalContext::ALL.len()],
            general: vec![GeneralTable::default(); GeneralContext::ALL.len()],
            general_units: 0,
            mention_units: BTreeMap::new(),
        }
    }

    /// A contribution sharing this instance's term space.
    pub(crate) fn empty_like(&self) -> Self {
        Self::with_shared(Arc::clone(&self.terms), Arc::clone(&self.index))
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term_id(&self, term: &str) -> Option<TermId> {
        self.index.get(term).copied()
    }

    pub fn term(&self, id: TermId) -> &str {
        &self.terms[id as usize]
    }

    /// `n_x`: total mentions of `term` across all blocks.
    pub fn mentions(&self, term: TermId) -> u64 {
        self.mentions.get(&term).copied().unwrap_or(0)
    }

    /// `z_c^2`: mentions inside section titles.
    pub fn section_title_count(&self, term: TermId) -> u64 {
        self.section_title.get(&term).copied().unwrap_or(0)
    }

    /// `z_c^3`: mentions inside definition text.
    pub fn definition_count(&self, term: TermId) -> u64 {
        self.definition_text.get(&term).copied().unwrap_or(0)
    }

    pub fn relational(&self, ctx: RelationalContext) -> &RelationalTable {
        &self.relational[ctx.index()]
    }

    pub fn general(&self, ctx: GeneralContext) -> &GeneralTable {
        &self.general[ctx.index()]
    }

    /// `n_{i,x}` for a relational context: units with `x` in the hypernym slot.
    pub fn head_count(&self, ctx: RelationalContext, term: TermId) -> u64 {
        self.relational(ctx).head_units(term).len() as u64
    }

    /// Number of general units (one per block node).
    pub fn general_units(&self) -> u32 {
        self.general_units
    }

    /// General units whose text mentions `term`, ascending.
    pub fn mention_units(&self, term: TermId) -> &[UnitId] {
        self.mention_units.get(&term).map_or(&[], Vec::as_slice)
    }

    pub fn is_mentioned_in(&self, unit: UnitId, term: TermId) -> bool {
        self.mention_units(term).binary_search(&unit).is_ok()
    }

    /// True when no mention of any term was recorded.
    pub fn is_empty(&self) -> bool {
        self.mentions.is_empty()
    }

    pub(crate) fn add_mention(&mut self, term: TermId) {
        *self.mentions.entry(term).or_default() += 1;
    }

    pub(crate) fn add_section_title(&mut self, term: TermId) {
        *self.section_title.entry(term).or_default() += 1;
    }

    pub(crate) fn add_definition(&mut self, term: TermId) {
        *self.definition_text.entry(term).or_default() += 1;
    }

    pub(crate) fn relational_mut(&mut self, ctx: RelationalContext) -> &mut RelationalTable {
        &mut self.relational[ctx.index()]
    }

    /// Registers a general unit with the set of terms it mentions.
    pub(crate) fn add_general_unit(&mut self, mentioned: &BTreeSet<TermId>) -> UnitId {
        let unit = self.general_units;
        self.general_units += 1;
        for &t in mentioned {
            self.mention_units.entry(t).or_default().push(unit);
        }
        unit
    }

    pub(crate) fn set_general(&mut self, ctx: GeneralContext, unit: UnitId, values: &BTreeMap<TermId, i8>) {
        self.general[ctx.index()].set_unit(unit, values);
    }

    /// Appends `other`, renumbering its units after this instance's. The
    /// merge is associative, and any merge order yields the same per-term
    /// counts and unit multisets.
    pub fn merge(&mut self, other: &StructureStats) {
        debug_assert!(Arc::ptr_eq(&self.terms, &other.terms) || self.terms == other.terms);
        for (map, theirs) in [
            (&mut self.mentions, &other.mentions),
            (&mut self.section_title, &other.section_title),
            (&mut self.definition_text, &other.definition_text),
        ] {
            for (&t, &n) in theirs {
                *map.entry(t).or_default() += n;
            }
        }
        for (mine, theirs) in self.relational.iter_mut().zip(&other.relational) {
            mine.merge(theirs);
        }
        let offset = self.general_units;
        for (mine, theirs) in self.general.iter_mut().zip(&other.general) {
            mine.merge(theirs, offset);
        }
        for (&t, units) in &other.mention_units {
            self.mention_units
                .entry(t)
                .or_default()
                .extend(units.iter().map(|u| u + offset));
        }
        self.general_units += other.general_units;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("stats serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StatsFile = serde_json::from_str(text)?;
        Self::from_file(file)
    }

    fn to_file(&self) -> StatsFile {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (id, term) in self.terms.iter().enumerate() {
            let id = id as TermId;
            let mut relational = BTreeMap::new();
            for ctx in RelationalContext::ALL {
                let table = self.relational(ctx);
                let (heads, items) = (table.head_units(id), table.item_units(id));
                if !heads.is_empty() || !items.is_empty() {
                    relational.insert(
                        ctx.name().to_string(),
                        RelationalEntry {
                            heads: heads.to_vec(),
                            items: items.to_vec(),
                        },
                    );
                }
            }
            let mut general = BTreeMap::new();
            for ctx in GeneralContext::ALL {
                let values = self.general(ctx).term_values(id);
                if !values.is_empty() {
                    general.insert(ctx.name().to_string(), values.to_vec());
                }
            }
            terms.push(TermEntry {
                term: term.clone(),
                mentions: self.mentions(id),
                section_title: self.section_title_count(id),
                definition_text: self.definition_count(id),
                mention_units: self.mention_units(id).to_vec(),
                relational,
                general,
            });
        }
        StatsFile {
            version: STATS_VERSION,
            general_units: self.general_units,
            relational_units: RelationalContext::ALL
                .iter()
                .map(|c| (c.name().to_string(), self.relational(*c).units()))
                .collect(),
            general_context_units: GeneralContext::ALL
                .iter()
                .map(|c| (c.name().to_string(), self.general(*c).units()))
                .collect(),
            terms,
        }
    }

    fn from_file(file: StatsFile) -> Result<Self> {
        if file.version != STATS_VERSION {
            return Err(Error::schema("version", format!("unsupported stats version {}", file.version)));
        }
        let terms: Vec<String> = file.terms.iter().map(|t| t.term.clone()).collect();
        let mut stats = StructureStats::with_terms(Arc::new(terms));
        if stats.index.len() != stats.terms.len() {
            return Err(Error::schema("terms", "duplicate term"));
        }
        stats.general_units = file.general_units;
        let rel_units = |name: &str| file.relational_units.get(name).copied().unwrap_or(0);
        for ctx in RelationalContext::ALL {
            let n = rel_units(ctx.name());
            let table = stats.relational_mut(ctx);
            table.units = n;
            table.heads_by_unit = vec![Vec::new(); n as usize];
            table.items_by_unit = vec![Vec::new(); n as usize];
        }
        for (i, entry) in file.terms.into_iter().enumerate() {
            let id = i as TermId;
            let path = format!("terms[{i}]");
            for (map, n) in [
                (&mut stats.mentions, entry.mentions),
                (&mut stats.section_title, entry.section_title),
                (&mut stats.definition_text, entry.definition_text),
            ] {
                if n > 0 {
                    map.insert(id, n);
                }
            }
            check_units(&entry.mention_units, stats.general_units, &format!("{path}.mention_units"))?;
            if !entry.mention_units.is_empty() {
                stats.mention_units.insert(id, entry.mention_units);
            }
            for (name, rel) in entry.relational {
                let ctx = RelationalContext::ALL
                    .into_iter()
                    .find(|c| c.name() == name)
                    .ok_or_else(|| Error::schema(format!("{path}.relational"), format!("unknown context {name:?}")))?;
                let table = stats.relational_mut(ctx);
                check_units(&rel.heads, table.units, &format!("{path}.relational.{name}.heads"))?;
                check_units(&rel.items, table.units, &format!("{path}.relational.{name}.items"))?;
                for &u in &rel.heads {
                    table.heads_by_unit[u as usize].push(id);
                }
                for &u in &rel.items {
                    table.items_by_unit[u as usize].push(id);
                }
                if !rel.heads.is_empty() {
                    table.heads.insert(id, rel.heads);
                }
                if !rel.items.is_empty() {
                    table.items.insert(id, rel.items);
                }
            }
            for (name, values) in entry.general {
                let ctx = GeneralContext::ALL
                    .into_iter()
                    .find(|c| c.name() == name)
                    .ok_or_else(|| Error::schema(format!("{path}.general"), format!("unknown context {name:?}")))?;
                let units: Vec<UnitId> = values.iter().map(|v| v.0).collect();
                check_units(&units, stats.general_units, &format!("{path}.general.{name}"))?;
                if values.iter().any(|v| !matches!(v.1, -1 | 1)) {
                    return Err(Error::schema(format!("{path}.general.{name}"), "values must be -1 or +1"));
                }
                let table = &mut stats.general[ctx.index()];
                for &(u, v) in &values {
                    table.by_unit.entry(u).or_default().push((id, v));
                }
                table.by_term.insert(id, values);
            }
        }
        for ctx in GeneralContext::ALL {
            let table = &mut stats.general[ctx.index()];
            table.units = table.by_unit.len() as u32;
            let declared = file.general_context_units.get(ctx.name()).copied().unwrap_or(0);
            if declared != table.units {
                return Err(Error::schema(
                    format!("general_context_units.{}", ctx.name()),
                    format!("declared {declared} units, found {}", table.units),
                ));
            }
        }
        Ok(stats)
    }
}

fn check_units(units: &[UnitId], limit: u32, path: &str) -> Result<()> {
    if units.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::schema(path, "unit ids must be strictly ascending"));
    }
    if units.last().is_some_and(|&u| u >= limit) {
        return Err(Error::schema(path, format!("unit id out of range (limit {limit})")));
    }
    Ok(())
}

const STATS_VERSION: u32 = 1;

/// On-disk layout: one record per term, in term-id order.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StatsFile {
    version: u32,
    general_units: u32,
    relational_units: BTreeMap<String, u32>,
    general_context_units: BTreeMap<String, u32>,
    terms: Vec<TermEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermEntry {
    term: String,
    #[serde(default)]
    mentions: u64,
    #[serde(default)]
    section_title: u64,
    #[serde(default)]
    definition_text: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    mention_units: Vec<UnitId>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    relational: BTreeMap<String, RelationalEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    general: BTreeMap<String, Vec<(UnitId, i8)>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationalEntry {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    heads: Vec<UnitId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    items: Vec<UnitId>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        Vocabulary::from_terms(["x", "y", "z"], 1, 0).unwrap()
    }

    fn set(ids: &[TermId]) -> BTreeSet<TermId> {
        ids.iter().copied().collect()
    }

    #[test]
    fn relational_indicators_both_directions() {
        let mut s = StructureStats::new(&vocab());
        let t = s.relational_mut(RelationalContext::BulletList);
        t.add_unit(&set(&[0]), &set(&[1, 2]));
        t.add_unit(&set(&[0, 1]), &set(&[]));
        let t = s.relational(RelationalContext::BulletList);
        assert_eq!(t.units(), 2);
        assert_eq!(t.head_units(0), [0, 1]);
        assert_eq!(t.items_in(0), [1, 2]);
        assert_eq!((t.a(1, 1), t.b(1, 1), t.b(0, 1)), (1, 0, 1));
        assert_eq!(s.head_count(RelationalContext::BulletList, 0), 2);
    }

    #[test]
    fn merge_offsets_units() {
        let v = vocab();
        let mut a = StructureStats::new(&v);
        let mut b = a.empty_like();
        a.relational_mut(RelationalContext::Footnote).add_unit(&set(&[0]), &set(&[1]));
        a.add_mention(0);
        let u = b.add_general_unit(&set(&[2]));
        b.set_general(GeneralContext::Uppercase, u, &[(2, 1)].into_iter().collect());
        b.relational_mut(RelationalContext::Footnote).add_unit(&set(&[2]), &set(&[0]));
        b.add_mention(0);
        let u0 = a.add_general_unit(&set(&[0]));
        assert_eq!(u0, 0);
        a.merge(&b);
        assert_eq!(a.mentions(0), 2);
        let fn_table = a.relational(RelationalContext::Footnote);
        assert_eq!(fn_table.units(), 2);
        assert_eq!(fn_table.head_units(2), [1]);
        assert_eq!(a.general_units(), 2);
        assert_eq!(a.general(GeneralContext::Uppercase).c(1, 2), 1);
        assert_eq!(a.mention_units(2), [1]);
    }

    #[test]
    fn zero_values_are_not_stored() {
        let mut s = StructureStats::new(&vocab());
        let u = s.add_general_unit(&set(&[0]));
        s.set_general(GeneralContext::Caption, u, &[(0, 0)].into_iter().collect());
        assert_eq!(s.general(GeneralContext::Caption).units(), 0);
        assert_eq!(s.general(GeneralContext::Caption).c(u, 0), 0);
    }

    #[test]
    fn json_round_trip() {
        let mut s = StructureStats::new(&vocab());
        s.relational_mut(RelationalContext::SectionHierarchy).add_unit(&set(&[0]), &set(&[1, 2]));
        s.relational_mut(RelationalContext::SectionHierarchy).add_unit(&set(&[1]), &set(&[2]));
        let u = s.add_general_unit(&set(&[0, 1]));
        s.set_general(GeneralContext::QuestionNoun, u, &[(1, -1)].into_iter().collect());
        s.add_mention(0);
        s.add_mention(1);
        s.add_section_title(0);
        s.add_definition(1);
        let json = s.to_json();
        let back = StructureStats::from_json(&json).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn json_rejects_bad_units() {
        let bad = r#"{"version":1,"general_units":1,"relational_units":{},"general_context_units":{},"terms":[{"term":"x","mention_units":[3]}]}"#;
        let err = StructureStats::from_json(bad).unwrap_err().to_string();
        assert!(err.contains("terms[0].mention_units"), "{err}");
    }
}
