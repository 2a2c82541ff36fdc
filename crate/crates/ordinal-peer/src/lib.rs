//! Statistics for ordinal categorical distributions (for example, the share of
//! a region's population in each socioeconomic decile).
//!
//! The crate provides
//!
//! * concentration ([`lorenz`]): Lorenz curve, Concentration Index, true
//!   diversity and concentration-specification bounds;
//! * polarization ([`divergence`]): bilateral CDF, its autocorrelation,
//!   compactness and the Divergence Index;
//! * homogeneity ([`homogeneity`]): the Homogeneity Index and the
//!   value-validity loss framework;
//! * location ([`location`]): Bin Concentration Function, Location Index and
//!   mean absolute deviation;
//! * classification ([`classifier`]): equivalence-class tables, homogeneity
//!   groups, benchmark partitions and region profiles;
//! * peer groups ([`cluster`]): three-term dissimilarity, PAM and silhouettes;
//! * ingestion ([`ingest`]): subunit CSV parsing, aggregation and
//!   population-weighted scores.

pub mod classifier;
pub mod cluster;
pub mod divergence;
pub mod error;
pub mod homogeneity;
pub mod ingest;
pub mod location;
pub mod lorenz;
pub mod ordinal;

pub use classifier::{
    benchmark_category, classify_equivalence, concentration_matrix, diversity_table, group_table, homogeneity_group,
    region_profile, region_profile_with, skewed_table, symmetric_table, BenchmarkCategory, BenchmarkLabel,
    BenchmarkPartition, BenchmarkPreset, ClassTable, EquivalenceClass, GroupLabel, HomogeneityGroup, RegionProfile,
    ScoreSummary, TableKind, Typology,
};
pub use cluster::{
    choose_k, dissimilarity, distance_terms, l1_shape, location_distance, pam, silhouette, sorensen, Clustering,
    DistanceMatrix, DistanceParams, DistanceTerms, KSelection,
};
pub use divergence::{bcdf, bcdfa, compactness, divergence_index, jsd, Polarization, PolarizationMeasure};
pub use error::{OrdinalError, Result};
pub use homogeneity::{hi, hi_equal_abundance, homogeneity_index, value_validity, HomogeneityConfig, ValidityReport};
pub use ingest::{aggregate, parse_subunit_csv, parse_subunit_file, pwavgs, RegionDataset, SubunitRecord};
pub use location::{bcf_vector, location_index, mad, LocationResult};
pub use lorenz::{
    ci_from_diversity, cis_lower_bound, cis_upper_bound, concentration_index, diversity_from_ci, lorenz_curve,
    ConcentrationSpec,
};
pub use ordinal::{
    lambda_dist, lambda_mu_dist, make_distribution, moments, skewness_class, LambdaMuParams, OrdinalDistribution,
    SkewClass, SkewKind,
};
