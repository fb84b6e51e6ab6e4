use crate::error::{Error, Result};

/// Binary K×J factor-graph matrix: rows are resource nodes, columns are user nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorMatrix {
    resources: usize,
    users: usize,
    entries: Vec<bool>,
    users_on: Vec<Vec<usize>>,
    resources_of: Vec<Vec<usize>>,
}

impl IndicatorMatrix {
    /// Builds the matrix from K rows of J zero/one entries.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let resources = rows.len();
        if resources == 0 {
            return Err(Error::InvalidCodebook("indicator matrix has no rows".into()));
        }
        let users = rows[0].len();
        if users == 0 {
            return Err(Error::InvalidCodebook("indicator matrix has no columns".into()));
        }
        let mut entries = Vec::with_capacity(resources * users);
        for (k, row) in rows.iter().enumerate() {
            if row.len() != users {
                return Err(Error::Dimension {
                    what: "indicator row",
                    expected: users,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => entries.push(false),
                    1 => entries.push(true),
                    _ => {
                        return Err(Error::InvalidCodebook(format!(
                            "indicator entry ({k}, {j}) is {v}, expected 0 or 1"
                        )))
                    }
                }
            }
        }
        Self::from_entries(resources, users, entries)
    }

    fn from_entries(resources: usize, users: usize, entries: Vec<bool>) -> Result<Self> {
        let users_on: Vec<Vec<usize>> = (0..resources)
            .map(|k| (0..users).filter(|&j| entries[k * users + j]).collect())
            .collect();
        let resources_of: Vec<Vec<usize>> = (0..users)
            .map(|j| (0..resources).filter(|&k| entries[k * users + j]).collect())
            .collect();
        if let Some(k) = users_on.iter().position(Vec::is_empty) {
            return Err(Error::InvalidCodebook(format!("resource {k} carries no user")));
        }
        if let Some(j) = resources_of.iter().position(Vec::is_empty) {
            return Err(Error::InvalidCodebook(format!("user {j} occupies no resource")));
        }
        Ok(Self {
            resources,
            users,
            entries,
            users_on,
            resources_of,
        })
    }

    /// Number of resource nodes (K).
    pub fn resources(&self) -> usize {
        self.resources
    }

    /// Number of user nodes (J).
    pub fn users(&self) -> usize {
        self.users
    }

    pub fn get(&self, resource: usize, user: usize) -> bool {
        self.entries[resource * self.users + user]
    }

    /// Users sharing resource `k`, in increasing order.
    pub fn users_on(&self, resource: usize) -> &[usize] {
        &self.users_on[resource]
    }

    /// Resources occupied by user `j`, in increasing order.
    pub fn resources_of(&self, user: usize) -> &[usize] {
        &self.resources_of[user]
    }

    pub fn user_degree(&self, user: usize) -> usize {
        self.resources_of[user].len()
    }

    pub fn resource_degree(&self, resource: usize) -> usize {
        self.users_on[resource].len()
    }

    pub fn max_resource_degree(&self) -> usize {
        self.users_on.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Returns the matrix with its columns reordered: column `i` of the result is
    /// column `order[i]` of `self`.
    pub fn permute_users(&self, order: &[usize]) -> Result<Self> {
        check_permutation(order, self.users)?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for k in 0..self.resources {
            for &j in order {
                entries.push(self.get(k, j));
            }
        }
        Self::from_entries(self.resources, self.users, entries)
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.resources)
            .map(|k| (0..self.users).map(|j| self.get(k, j) as u8).collect())
            .collect()
    }
}

pub(crate) fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::Dimension {
            what: "permutation",
            expected: n,
            found: order.len(),
        });
    }
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidCodebook(format!("{order:?} is not a permutation")));
        }
    }
    Ok(())
}
