use std::collections::HashMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::{self, Stream};
use crate::scoring::ScoreTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    /// Curriculum: easiest (lowest score) first.
    Ascending,
    /// Anti-curriculum: hardest first.
    Descending,
    Random,
}

impl Order {
    pub const ALL: [Order; 3] = [Order::Ascending, Order::Descending, Order::Random];

    pub fn name(self) -> &'static str {
        match self {
            Order::Ascending => "ascending",
            Order::Descending => "descending",
            Order::Random => "random",
        }
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Order::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown order {s:?}")))
    }
}

/// A class-balanced ranking of the training set.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedIndex {
    /// Dataset positions in presentation order.
    pub positions: Vec<usize>,
    /// Example ids in presentation order.
    pub ids: Vec<u64>,
    /// Per-class positions in rank order, indexed by class.
    pub per_class: Vec<Vec<usize>>,
    /// Round-robin visiting order of the classes.
    pub class_order: Vec<usize>,
}

impl OrderedIndex {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Sorts each class by score (ties broken by ascending id), then interleaves
/// the classes round-robin in a seeded class order. Descending order sorts by
/// decreasing score with the same id tie-break; random order shuffles each
/// class instead.
pub fn order_examples(
    dataset: &Dataset,
    scores: &ScoreTable,
    order: Order,
    seed: u64,
) -> Result<OrderedIndex> {
    let lookup: HashMap<u64, f64> = scores.ids.iter().copied().zip(scores.scores.iter().copied()).collect();
    let mut by_position = Vec::with_capacity(dataset.len());
    for &id in dataset.ids() {
        let s = *lookup.get(&id).ok_or(Error::MissingScore(id))?;
        if !s.is_finite() {
            return Err(Error::InvalidArgument(format!("score for id {id} is not finite")));
        }
        by_position.push(s);
    }

    let mut rng = rng::stream(seed, Stream::Ordering);
    let mut per_class: Vec<Vec<usize>> = vec![Vec::new(); dataset.num_classes];
    for (p, &y) in dataset.labels().iter().enumerate() {
        per_class[y].push(p);
    }
    let ids = dataset.ids();
    let mut class_order: Vec<usize> = (0..dataset.num_classes)
        .filter(|&c| !per_class[c].is_empty())
        .collect();
    class_order.shuffle(&mut rng);
    for members in &mut per_class {
        match order {
            Order::Ascending => members.sort_by(|&a, &b| {
                by_position[a]
                    .total_cmp(&by_position[b])
                    .then(ids[a].cmp(&ids[b]))
            }),
            Order::Descending => members.sort_by(|&a, &b| {
                by_position[b]
                    .total_cmp(&by_position[a])
                    .then(ids[a].cmp(&ids[b]))
            }),
            Order::Random => members.shuffle(&mut rng),
        }
    }

    let mut positions = Vec::with_capacity(dataset.len());
    let longest = per_class.iter().map(Vec::len).max().unwrap_or(0);
    for rank in 0..longest {
        for &c in &class_order {
            if let Some(&p) = per_class[c].get(rank) {
                positions.push(p);
            }
        }
    }
    Ok(OrderedIndex {
        ids: positions.iter().map(|&p| ids[p]).collect(),
        positions,
        per_class,
        class_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::{ScoreMethod, ScoreTable};

    fn two_class() -> (Dataset, ScoreTable) {
        // ids 0,1 class A; 2,3 class B
        let ds = Dataset::new(
            "o",
            2,
            vec![1],
            vec![0, 1, 2, 3],
            vec![0.0; 4],
            vec![0, 0, 1, 1],
        )
        .unwrap();
        let table = ScoreTable::new("o", ScoreMethod::Oracle, vec![0, 1, 2, 3], vec![3.0, 1.0, 2.0, 4.0]);
        (ds, table)
    }

    #[test]
    fn ascending_prefix_takes_each_class_minimum() {
        let (ds, table) = two_class();
        let idx = order_examples(&ds, &table, Order::Ascending, 5).unwrap();
        let mut first_two = idx.ids[..2].to_vec();
        first_two.sort();
        assert_eq!(first_two, vec![1, 2]);
        assert_eq!(idx.per_class[0], vec![1, 0]);
        assert_eq!(idx.per_class[1], vec![2, 3]);
    }

    #[test]
    fn descending_reverses_each_class() {
        let (ds, table) = two_class();
        let asc = order_examples(&ds, &table, Order::Ascending, 5).unwrap();
        let desc = order_examples(&ds, &table, Order::Descending, 5).unwrap();
        for c in 0..2 {
            let mut rev = asc.per_class[c].clone();
            rev.reverse();
            assert_eq!(desc.per_class[c], rev);
        }
    }

    #[test]
    fn equal_scores_tie_break_by_id() {
        let (ds, _) = two_class();
        let flat = ScoreTable::new("o", ScoreMethod::Oracle, vec![0, 1, 2, 3], vec![1.0; 4]);
        let asc = order_examples(&ds, &flat, Order::Ascending, 2).unwrap();
        let desc = order_examples(&ds, &flat, Order::Descending, 2).unwrap();
        assert_eq!(asc.per_class, desc.per_class);
        assert_eq!(asc.per_class[0], vec![0, 1]);
    }

    #[test]
    fn missing_score_is_an_error() {
        let (ds, _) = two_class();
        let partial = ScoreTable::new("o", ScoreMethod::Oracle, vec![0, 1, 2], vec![1.0; 3]);
        assert!(matches!(
            order_examples(&ds, &partial, Order::Random, 0),
            Err(Error::MissingScore(3))
        ));
    }
}
