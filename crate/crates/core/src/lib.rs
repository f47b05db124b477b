//! Frequent itemset mining and evaluation machinery for recommending files
//! that change together.
//!
//! Everything here is pure computation over in-memory data and builds without
//! `std`; reading Git histories, file formats and the command line live in the
//! `cochange` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod db;
pub mod eval;
pub mod itemset;
pub mod miners;
pub mod prep;
pub mod rules;
pub mod stats;

pub use db::{
    intern_paths, tidset_intersect, to_vertical, DbError, Interner, ItemId, Tidset, Timestamp, Transaction,
    TransactionDatabase, VerticalDatabase,
};
pub use itemset::{FrequentItemsetSet, Itemset};
pub use miners::{Algorithm, MiningError, MiningParams};
pub use rules::{generate_rules, AssociationRule, Recommendation, Recommender};
