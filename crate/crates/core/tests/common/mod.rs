#![allow(dead_code)]

use cochange_core::{ItemId, Timestamp, TransactionDatabase};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// The nine-transaction database whose vertical form is the textbook
/// I1..I5 / T100..T900 example. `I1` is interned first, so `Ik` is `ItemId(k-1)`.
pub fn textbook_db() -> TransactionDatabase {
    let rows: [(&str, &[&str]); 9] = [
        ("T100", &["I1", "I2", "I5"]),
        ("T200", &["I2", "I4"]),
        ("T300", &["I2", "I3"]),
        ("T400", &["I1", "I2", "I4"]),
        ("T500", &["I1", "I3"]),
        ("T600", &["I2", "I3"]),
        ("T700", &["I1", "I3"]),
        ("T800", &["I1", "I2", "I3", "I5"]),
        ("T900", &["I1", "I2", "I3"]),
    ];
    let mut b = TransactionDatabase::builder();
    for name in ["I1", "I2", "I3", "I4", "I5"] {
        b.interner_mut().intern(name);
    }
    for (i, (id, items)) in rows.iter().enumerate() {
        b.push(*id, Timestamp(i as i64), items);
    }
    b.build()
}

pub fn item(name: &str) -> ItemId {
    ItemId(name[1..].parse::<u32>().unwrap() - 1)
}

pub fn items(names: &[&str]) -> Vec<ItemId> {
    names.iter().map(|n| item(n)).collect()
}

/// TID index `k` is transaction `T{k+1}00`.
pub fn tids(names: &[&str]) -> Vec<u32> {
    names.iter().map(|n| n[1..n.len() - 2].parse::<u32>().unwrap() - 1).collect()
}

/// Random database with up to `max_items` distinct files and up to
/// `max_txns` transactions of 1..=max_items files.
pub fn random_db(rng: &mut ChaCha8Rng, max_items: usize, max_txns: usize) -> TransactionDatabase {
    let universe = rng.gen_range(1..=max_items);
    let txns = rng.gen_range(1..=max_txns);
    let density: f64 = rng.gen_range(0.1..0.7);
    let mut b = TransactionDatabase::builder();
    for t in 0..txns {
        let mut files: Vec<String> =
            (0..universe).filter(|_| rng.gen_bool(density)).map(|i| format!("f{i:02}.java")).collect();
        if files.is_empty() {
            files.push(format!("f{:02}.java", rng.gen_range(0..universe)));
        }
        b.push(format!("c{t:03}"), Timestamp(t as i64), &files);
    }
    b.build()
}
