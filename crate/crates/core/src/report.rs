//! Serializable views of assignments, shared by the command-line reports.

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::model::{assignment_cost, check_fairness, Assignment, CenterSummary, Instance, InstanceError};

/// Point id to center id, serialized as a JSON object in point order.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiMap(pub Vec<(String, String)>);

impl Serialize for PhiMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (point, center) in &self.0 {
            map.serialize_entry(point, center)?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssignmentReport {
    pub centers: Vec<String>,
    pub phi: PhiMap,
    pub max_load: f64,
    pub per_center: Vec<CenterSummary>,
    pub fair: bool,
}

impl AssignmentReport {
    pub fn new(inst: &Instance, a: &Assignment) -> Result<Self, InstanceError> {
        let per_center = a.summarize(inst)?;
        let centers: Vec<String> = a.centers().iter().map(|c| inst.center_id(c)).collect();
        let phi = inst.points().iter().zip(a.phi()).map(|(p, &slot)| (p.id.clone(), centers[slot].clone())).collect();
        Ok(Self {
            max_load: assignment_cost(inst, a)?,
            fair: check_fairness(inst, a).is_fair(),
            centers,
            phi: PhiMap(phi),
            per_center,
        })
    }
}
