//! Hand-built example corpora shared by tests, demos and the acceptance
//! suite.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::corpus::{
    build_graph, CitationRecord, CorpusGraph, GraphOptions, PublicationRecord, VenueRecord,
};
use crate::registry::{RegistryRecord, SubjectCategoryRegistry};

/// A corpus in record form, buildable into a [`CorpusGraph`] or writable to
/// the on-disk input formats.
#[derive(Debug, Clone)]
pub struct ExampleCorpus {
    pub registry: Vec<RegistryRecord>,
    pub venues: Vec<VenueRecord>,
    pub publications: Vec<PublicationRecord>,
    pub citations: Vec<CitationRecord>,
    pub cohort_year: i32,
    pub horizon_year: i32,
}

impl ExampleCorpus {
    pub fn build(&self) -> CorpusGraph {
        let registry = SubjectCategoryRegistry::from_records(&self.registry, false)
            .expect("fixture registry is well-formed");
        build_graph(
            registry,
            &self.venues,
            &self.publications,
            &self.citations,
            self.cohort_year,
            self.horizon_year,
            GraphOptions::default(),
        )
        .expect("fixture corpus is well-formed")
    }
}

fn reg(sc: &str, sc_name: &str, area: &str, area_name: &str) -> RegistryRecord {
    RegistryRecord {
        sc_code: sc.to_string(),
        sc_name: sc_name.to_string(),
        area_code: area.to_string(),
        area_name: area_name.to_string(),
    }
}

/// One cited 2015 publication hosted in a two-category venue
/// {Information Science & Library Science, Computer Science Interdisciplinary
/// Applications}, receiving 51 citations: 24 from ISLS, 4 from CSIA, 2 from
/// Education, 4 from Multidisciplinary Sciences and 17 from seventeen
/// distinct other categories (one each). All citing publications sit in
/// single-category venues.
pub fn multi_category_example() -> ExampleCorpus {
    let mut registry = alloc::vec![
        reg(
            "ISLS",
            "Information Science & Library Science",
            "LPS",
            "Law, political and social sciences",
        ),
        reg(
            "CSIA",
            "Computer Science, Interdisciplinary Applications",
            "ENG",
            "Engineering",
        ),
        reg(
            "EDU",
            "Education & Educational Research",
            "LPS",
            "Law, political and social sciences",
        ),
        reg("MULT", "Multidisciplinary Sciences", "MUL", "Multidisciplinary Sciences"),
    ];
    for i in 1..=17 {
        registry.push(reg(
            &format!("X{i:02}"),
            &format!("Other Category {i:02}"),
            "OTH",
            "Other",
        ));
    }

    let mut venues = alloc::vec![VenueRecord {
        venue_id: "v_joi".to_string(),
        name: "Journal hosting the cited publication".to_string(),
        sc_codes: alloc::vec!["ISLS".to_string(), "CSIA".to_string()],
    }];
    let single_venue = |sc: &str| VenueRecord {
        venue_id: format!("v_{}", sc.to_lowercase()),
        name: format!("Single-category venue {sc}"),
        sc_codes: alloc::vec![sc.to_string()],
    };
    for sc in ["ISLS", "CSIA", "EDU", "MULT"] {
        venues.push(single_venue(sc));
    }
    for i in 1..=17 {
        venues.push(single_venue(&format!("X{i:02}")));
    }

    let mut publications = alloc::vec![PublicationRecord {
        pub_id: "p0".to_string(),
        venue_id: "v_joi".to_string(),
        year: 2015,
    }];
    let mut citations = Vec::new();
    let mut add_citers = |sc: &str, count: usize| {
        for k in 1..=count {
            let pub_id = format!("c_{}_{k:02}", sc.to_lowercase());
            publications.push(PublicationRecord {
                pub_id: pub_id.clone(),
                venue_id: format!("v_{}", sc.to_lowercase()),
                year: 2016,
            });
            citations.push(CitationRecord {
                citing_id: pub_id,
                cited_id: "p0".to_string(),
            });
        }
    };
    add_citers("ISLS", 24);
    add_citers("CSIA", 4);
    add_citers("EDU", 2);
    add_citers("MULT", 4);
    for i in 1..=17 {
        add_citers(&format!("X{i:02}"), 1);
    }

    ExampleCorpus {
        registry,
        venues,
        publications,
        citations,
        cohort_year: 2015,
        horizon_year: 2022,
    }
}
