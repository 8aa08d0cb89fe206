//! Storage-system lifecycle: encode a file onto n nodes, fail and repair
//! nodes, reconstruct from any k, and track a passive adversary who
//! accumulates node observations.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::code::{AnyCode, DssCode, NodeData};
use crate::error::{Error, Result};
use crate::ff::FieldElement;
use crate::security::{block_security_level, perfect_secrecy_check, SecureWrap, SecurityReport};

/// Append-only record of everything that happened to the system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Init {
        family: String,
        n: usize,
        k: usize,
        d: usize,
        q: u64,
        lambda: Option<usize>,
        seed: Option<u64>,
    },
    Fail {
        node: usize,
    },
    Repair {
        node: usize,
        helpers: Vec<usize>,
        downloads_per_helper: usize,
    },
    Collect {
        nodes: Vec<usize>,
    },
    Eavesdrop {
        node: usize,
        new_rows: usize,
    },
    Report {
        observed: Vec<usize>,
        block_level: usize,
    },
}

/// A passive adversary: the cumulative set of observed nodes. The
/// observation matrix is always derived fresh from this set, so repeat
/// observations add nothing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdversaryState {
    observed: BTreeSet<usize>,
}

impl AdversaryState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn observed(&self) -> Vec<usize> {
        self.observed.iter().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.observed.is_empty()
    }
}

/// The live system: code, current file, per-node contents, and event log.
#[derive(Debug, Clone)]
pub struct DssState {
    code: AnyCode,
    wrap: Option<SecureWrap>,
    seed: Option<u64>,
    file: Vec<FieldElement>,
    /// `None` marks a failed node awaiting repair.
    contents: Vec<Option<NodeData>>,
    events: Vec<Event>,
}

impl DssState {
    /// Encodes `file` onto all n nodes.
    pub fn init(code: AnyCode, file: &[FieldElement]) -> Result<Self> {
        Self::start(code, None, None, file.to_vec())
    }

    /// Wraps the code at threshold λ: seeded random units are prepended to
    /// `secret` before encoding.
    pub fn init_wrapped(
        code: AnyCode,
        lambda: usize,
        secret: &[FieldElement],
        seed: u64,
    ) -> Result<Self> {
        let wrap = SecureWrap::new(&code, lambda)?;
        let file = wrap.assemble_file(code.field(), secret, seed)?;
        Self::start(code, Some(wrap), Some(seed), file)
    }

    fn start(
        code: AnyCode,
        wrap: Option<SecureWrap>,
        seed: Option<u64>,
        file: Vec<FieldElement>,
    ) -> Result<Self> {
        let contents = code.encode(&file)?.into_iter().map(Some).collect();
        let init = Event::Init {
            family: code.family().to_string(),
            n: code.n(),
            k: code.k(),
            d: code.d(),
            q: code.field().q(),
            lambda: wrap.map(|w| w.lambda()),
            seed,
        };
        Ok(DssState {
            code,
            wrap,
            seed,
            file,
            contents,
            events: vec![init],
        })
    }

    pub fn code(&self) -> &AnyCode {
        &self.code
    }
    pub fn wrap(&self) -> Option<&SecureWrap> {
        self.wrap.as_ref()
    }
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
    pub fn file(&self) -> &[FieldElement] {
        &self.file
    }
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn alive_nodes(&self) -> BTreeSet<usize> {
        (1..=self.code.n())
            .filter(|&i| self.contents[i - 1].is_some())
            .collect()
    }

    fn check_node(&self, node: usize) -> Result<()> {
        if node == 0 || node > self.code.n() {
            return Err(Error::BadIndex(format!(
                "node {node} not in 1..={}",
                self.code.n()
            )));
        }
        Ok(())
    }

    /// Marks a node failed and drops its content. Only one failure may be
    /// outstanding at a time.
    pub fn fail(&mut self, node: usize) -> Result<()> {
        self.check_node(node)?;
        if self.contents[node - 1].is_none() {
            return Err(Error::AlreadyFailed(node));
        }
        if let Some(other) = (1..=self.code.n()).find(|&i| self.contents[i - 1].is_none()) {
            return Err(Error::InsufficientAlive(format!(
                "node {other} is still awaiting repair"
            )));
        }
        self.contents[node - 1] = None;
        self.events.push(Event::Fail { node });
        Ok(())
    }

    /// Restores a failed node from β = 1 downloads. Helpers default to the
    /// family's canonical set; each must be alive. Exact repair is asserted:
    /// the restored content equals the pre-failure content.
    pub fn repair(&mut self, node: usize, helpers: Option<Vec<usize>>) -> Result<()> {
        self.check_node(node)?;
        if self.contents[node - 1].is_some() {
            return Err(Error::NotFailed(node));
        }
        let alive = self.alive_nodes();
        let helpers = match helpers {
            Some(h) => {
                if let Some(&dead) = h.iter().find(|&&id| !alive.contains(&id)) {
                    return Err(Error::InsufficientAlive(format!(
                        "helper {dead} is not alive"
                    )));
                }
                h
            }
            None => self.code.default_helpers(node, &alive)?,
        };
        let helper_contents: Vec<(usize, NodeData)> = helpers
            .iter()
            .map(|&h| (h, self.contents[h - 1].clone().expect("helper is alive")))
            .collect();
        let restored = self.code.repair(node, &helper_contents)?;
        let expected = &self.code.encode(&self.file)?[node - 1];
        assert_eq!(&restored, expected, "repair must be exact");
        self.contents[node - 1] = Some(restored);
        self.events.push(Event::Repair {
            node,
            helpers,
            downloads_per_helper: 1,
        });
        Ok(())
    }

    /// Reconstructs the file from k distinct alive nodes.
    pub fn collect(&mut self, nodes: &[usize]) -> Result<Vec<FieldElement>> {
        let distinct: BTreeSet<usize> = nodes.iter().copied().collect();
        if distinct.len() != nodes.len() || nodes.len() != self.code.k() {
            return Err(Error::BadIndex(format!(
                "need {} distinct nodes, got {:?}",
                self.code.k(),
                nodes
            )));
        }
        for &id in nodes {
            self.check_node(id)?;
            if self.contents[id - 1].is_none() {
                return Err(Error::InsufficientAlive(format!("node {id} is failed")));
            }
        }
        let picked: Vec<(usize, NodeData)> = nodes
            .iter()
            .map(|&id| (id, self.contents[id - 1].clone().expect("checked alive")))
            .collect();
        let file = self.code.reconstruct(&picked)?;
        self.events.push(Event::Collect {
            nodes: nodes.to_vec(),
        });
        Ok(file)
    }

    /// The adversary observes one node's stored content. Repaired nodes are
    /// observation-equivalent to originals, so any valid id is observable.
    pub fn eavesdrop(&mut self, adversary: &mut AdversaryState, node: usize) -> Result<()> {
        self.check_node(node)?;
        let before = self.observed_rows(adversary)?;
        adversary.observed.insert(node);
        let after = self.observed_rows(adversary)?;
        self.events.push(Event::Eavesdrop {
            node,
            new_rows: after - before,
        });
        Ok(())
    }

    fn observed_rows(&self, adversary: &AdversaryState) -> Result<usize> {
        if adversary.is_empty() {
            return Ok(0);
        }
        Ok(self
            .code
            .observation_matrix(&adversary.observed())?
            .rows())
    }

    /// Block level of everything the adversary has accumulated; for wrapped
    /// codes the perfect-secrecy rank criterion is attached.
    pub fn report(&mut self, adversary: &AdversaryState, budget: u64) -> Result<SecurityReport> {
        let m = self.code.file_size();
        let mut report = if adversary.is_empty() {
            SecurityReport {
                nodes: vec![],
                observed_rows: 0,
                rank: 0,
                min_distance: None,
                block_level: m,
                full_reconstruction: false,
                witness: None,
                perfectly_secure: None,
            }
        } else {
            let nodes = adversary.observed();
            let obs = self.code.observation_matrix(&nodes)?;
            block_security_level(&nodes, &obs, budget)?
        };
        if let Some(wrap) = &self.wrap {
            report.perfectly_secure = Some(if adversary.is_empty() {
                true
            } else {
                perfect_secrecy_check(&self.code, wrap, &adversary.observed())?
            });
        }
        self.events.push(Event::Report {
            observed: adversary.observed(),
            block_level: report.block_level,
        });
        Ok(report)
    }
}
