use super::{Assignment, Center, Instance, InstanceError};

/// A partition of the points into at most `k` blocks, each optionally with a center.
#[derive(Clone, Debug, PartialEq)]
pub struct Clustering {
    blocks: Vec<Vec<usize>>,
    centers: Vec<Option<Center>>,
}

impl Clustering {
    /// Blocks must be disjoint and cover `0..n`. Empty blocks are dropped.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, InstanceError> {
        let mut seen = vec![false; n];
        for block in &blocks {
            for &j in block {
                if j >= n || seen[j] {
                    return Err(InstanceError::Parse(format!("point {j} is out of range or appears twice")));
                }
                seen[j] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(InstanceError::Parse(format!("point {missing} is not covered")));
        }
        let blocks: Vec<Vec<usize>> = blocks.into_iter().filter(|b| !b.is_empty()).collect();
        let centers = vec![None; blocks.len()];
        Ok(Self { blocks, centers })
    }

    pub fn from_assignment(a: &Assignment) -> Self {
        let mut blocks = vec![Vec::new(); a.centers().len()];
        for (j, &slot) in a.phi().iter().enumerate() {
            blocks[slot].push(j);
        }
        let (blocks, centers) = blocks
            .into_iter()
            .zip(a.centers().iter().cloned())
            .filter(|(b, _)| !b.is_empty())
            .map(|(b, c)| (b, Some(c)))
            .unzip();
        Self { blocks, centers }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn centers(&self) -> &[Option<Center>] {
        &self.centers
    }

    /// Sum of distances from the block's points to `center`.
    pub fn block_cost(inst: &Instance, block: &[usize], center: &Center) -> Result<f64, InstanceError> {
        block.iter().map(|&j| inst.distance_to(j, center)).sum()
    }

    /// Best single-facility cost of a block, scanning the facility set.
    pub fn block_optimal_facility_cost(inst: &Instance, block: &[usize]) -> Option<f64> {
        (0..inst.facilities().len())
            .map(|f| block.iter().map(|&j| inst.facility_distance(j, f)).sum::<f64>())
            .min_by(f64::total_cmp)
    }

    /// Cost of this clustering when the blocks are matched to `centers` as well as
    /// possible: min over bijections of the max block cost. Needs
    /// `centers.len() >= blocks`; unmatched centers stay idle.
    pub fn cost_with_centers(&self, inst: &Instance, centers: &[Center]) -> Result<f64, InstanceError> {
        let b = self.blocks.len();
        if centers.len() < b {
            return Ok(f64::INFINITY);
        }
        let mut cost = vec![vec![0.0; centers.len()]; b];
        for (i, block) in self.blocks.iter().enumerate() {
            for (c, center) in centers.iter().enumerate() {
                cost[i][c] = Self::block_cost(inst, block, center)?;
            }
        }
        Ok(bottleneck_matching(&cost))
    }
}

/// Min over injective maps rows → columns of the max selected entry. Tries
/// thresholds in increasing order and checks for a perfect matching of the rows.
fn bottleneck_matching(cost: &[Vec<f64>]) -> f64 {
    let rows = cost.len();
    if rows == 0 {
        return 0.0;
    }
    let cols = cost[0].len();
    let mut values: Vec<f64> = cost.iter().flatten().copied().collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let feasible = |limit: f64| {
        let mut owner: Vec<Option<usize>> = vec![None; cols];
        (0..rows).all(|r| {
            let mut visited = vec![false; cols];
            augment(r, limit, cost, &mut owner, &mut visited)
        })
    };
    let (mut lo, mut hi) = (0usize, values.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(values[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    values[lo]
}

fn augment(r: usize, limit: f64, cost: &[Vec<f64>], owner: &mut [Option<usize>], visited: &mut [bool]) -> bool {
    for c in 0..owner.len() {
        if cost[r][c] <= limit && !visited[c] {
            visited[c] = true;
            if owner[c].is_none_or(|other| augment(other, limit, cost, owner, visited)) {
                owner[c] = Some(r);
                return true;
            }
        }
    }
    false
}
