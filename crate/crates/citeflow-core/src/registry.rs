//! Subject-category classification schema: categories grouped into macro-areas.

use alloc::string::String;
use alloc::vec::Vec;
use hashbrown::HashMap;

use crate::corpus::CorpusError;

/// Number of subject categories in the reference schema.
pub const REFERENCE_SC_COUNT: usize = 254;
/// Number of macro-areas in the reference schema.
pub const REFERENCE_AREA_COUNT: usize = 13;

/// Dense index of a macro-area within a registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AreaId(pub u32);

/// Dense index of a subject category within a registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Area {
    pub code: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubjectCategory {
    pub code: String,
    pub name: String,
    pub area: AreaId,
}

/// One row of `registry.csv`: a subject category together with its owning area.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegistryRecord {
    pub sc_code: String,
    pub sc_name: String,
    pub area_code: String,
    pub area_name: String,
}

/// The classification schema. Categories and areas are stored sorted by code,
/// so [`ScId`]/[`AreaId`] order equals lexicographic code order.
#[derive(Debug, Clone)]
pub struct SubjectCategoryRegistry {
    areas: Vec<Area>,
    categories: Vec<SubjectCategory>,
    area_by_code: HashMap<String, AreaId>,
    sc_by_code: HashMap<String, ScId>,
    reference_schema: bool,
}

impl SubjectCategoryRegistry {
    /// Builds a registry from flat records. Duplicate category codes are a
    /// hard error; areas are deduplicated by code (first name wins).
    /// `reference_schema` marks the registry as the full reference schema,
    /// which enables a soft size check during corpus validation.
    pub fn from_records(
        records: &[RegistryRecord],
        reference_schema: bool,
    ) -> Result<Self, CorpusError> {
        if records.is_empty() {
            return Err(CorpusError::EmptyRegistry);
        }

        let mut area_names: HashMap<&str, &str> = HashMap::new();
        let mut seen_sc: HashMap<&str, ()> = HashMap::new();
        for rec in records {
            if seen_sc.insert(&rec.sc_code, ()).is_some() {
                return Err(CorpusError::DuplicateSubjectCategory(rec.sc_code.clone()));
            }
            area_names.entry(&rec.area_code).or_insert(&rec.area_name);
        }

        let mut area_codes: Vec<&str> = area_names.keys().copied().collect();
        area_codes.sort_unstable();
        let areas: Vec<Area> = area_codes
            .iter()
            .map(|code| Area {
                code: String::from(*code),
                name: String::from(area_names[code]),
            })
            .collect();
        let area_by_code: HashMap<String, AreaId> = areas
            .iter()
            .enumerate()
            .map(|(i, a)| (a.code.clone(), AreaId(i as u32)))
            .collect();

        let mut sorted: Vec<&RegistryRecord> = records.iter().collect();
        sorted.sort_unstable_by(|a, b| a.sc_code.cmp(&b.sc_code));
        let categories: Vec<SubjectCategory> = sorted
            .iter()
            .map(|rec| SubjectCategory {
                code: rec.sc_code.clone(),
                name: rec.sc_name.clone(),
                area: area_by_code[&rec.area_code],
            })
            .collect();
        let sc_by_code: HashMap<String, ScId> = categories
            .iter()
            .enumerate()
            .map(|(i, c)| (c.code.clone(), ScId(i as u32)))
            .collect();

        Ok(Self {
            areas,
            categories,
            area_by_code,
            sc_by_code,
            reference_schema,
        })
    }

    pub fn n_areas(&self) -> usize {
        self.areas.len()
    }

    pub fn n_categories(&self) -> usize {
        self.categories.len()
    }

    pub fn area(&self, id: AreaId) -> &Area {
        &self.areas[id.0 as usize]
    }

    pub fn category(&self, id: ScId) -> &SubjectCategory {
        &self.categories[id.0 as usize]
    }

    /// Owning area of a subject category.
    pub fn area_of(&self, sc: ScId) -> AreaId {
        self.categories[sc.0 as usize].area
    }

    pub fn area_id(&self, code: &str) -> Option<AreaId> {
        self.area_by_code.get(code).copied()
    }

    pub fn sc_id(&self, code: &str) -> Option<ScId> {
        self.sc_by_code.get(code).copied()
    }

    /// Areas in [`AreaId`] order (lexicographic by code).
    pub fn areas(&self) -> impl Iterator<Item = (AreaId, &Area)> {
        self.areas
            .iter()
            .enumerate()
            .map(|(i, a)| (AreaId(i as u32), a))
    }

    /// Categories in [`ScId`] order (lexicographic by code).
    pub fn categories(&self) -> impl Iterator<Item = (ScId, &SubjectCategory)> {
        self.categories
            .iter()
            .enumerate()
            .map(|(i, c)| (ScId(i as u32), c))
    }

    pub fn is_reference_schema(&self) -> bool {
        self.reference_schema
    }

    /// True when the registry matches the reference schema dimensions.
    pub fn matches_reference_size(&self) -> bool {
        self.categories.len() == REFERENCE_SC_COUNT && self.areas.len() == REFERENCE_AREA_COUNT
    }
}
