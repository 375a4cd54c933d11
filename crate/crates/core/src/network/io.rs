//! JSON and CSV encodings of a network.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{ClscNetwork, Edge, Facility, FacilityId, FacilityKind, NetworkError};

/// On-disk JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub facilities: Vec<Facility>,
    pub edges: Vec<Edge>,
    #[serde(default)]
    pub return_rate: Option<f64>,
    #[serde(default)]
    pub single_allocation: bool,
}

impl NetworkFile {
    pub fn into_network(self) -> Result<ClscNetwork, NetworkError> {
        Ok(ClscNetwork::new(self.facilities, self.edges, self.return_rate, self.single_allocation)?)
    }
}

impl From<&ClscNetwork> for NetworkFile {
    fn from(net: &ClscNetwork) -> Self {
        NetworkFile {
            facilities: net.facilities.clone(),
            edges: net.edges.clone(),
            return_rate: net.return_rate,
            single_allocation: net.single_allocation,
        }
    }
}

/// Input encodings accepted by [`load_network`].
pub enum InputFormat<'a> {
    Json,
    /// `from,to,layer,weight` rows; facilities come from a second CSV with
    /// `id,kind,can_remanufacture,manufacturing_capacity,remanufacturing_capacity`
    /// (and an optional `label` column). CSV carries no network metadata, so
    /// it is passed alongside.
    CsvEdgeList {
        facilities: &'a mut dyn Read,
        return_rate: Option<f64>,
        single_allocation: bool,
    },
}

pub fn load_network<R: Read>(source: R, format: InputFormat<'_>) -> Result<ClscNetwork, NetworkError> {
    match format {
        InputFormat::Json => {
            let file: NetworkFile = serde_json::from_reader(source).map_err(classify_json)?;
            file.into_network()
        }
        InputFormat::CsvEdgeList { facilities, return_rate, single_allocation } => {
            let facilities = read_facilities_csv(facilities)?;
            let edges = read_edges_csv(source)?;
            Ok(ClscNetwork::new(facilities, edges, return_rate, single_allocation)?)
        }
    }
}

fn classify_json(err: serde_json::Error) -> NetworkError {
    use serde_json::error::Category;
    match err.classify() {
        Category::Data => NetworkError::Schema(err.to_string()),
        Category::Io | Category::Syntax | Category::Eof => NetworkError::Parse(err.to_string()),
    }
}

fn classify_csv(err: csv::Error) -> NetworkError {
    match err.kind() {
        csv::ErrorKind::Deserialize { .. } => NetworkError::Schema(err.to_string()),
        _ => NetworkError::Parse(err.to_string()),
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct FacilityRow {
    id: FacilityId,
    kind: FacilityKind,
    can_remanufacture: bool,
    manufacturing_capacity: Option<f64>,
    remanufacturing_capacity: Option<f64>,
    #[serde(default)]
    label: Option<String>,
}

const EDGE_HEADER: [&str; 4] = ["from", "to", "layer", "weight"];
const FACILITY_HEADER: [&str; 5] =
    ["id", "kind", "can_remanufacture", "manufacturing_capacity", "remanufacturing_capacity"];

fn check_header(reader: &mut csv::Reader<impl Read>, expected: &[&str]) -> Result<(), NetworkError> {
    let header = reader.headers().map_err(classify_csv)?;
    let found: Vec<&str> = header.iter().map(str::trim).collect();
    if found.len() < expected.len() || found[..expected.len()] != *expected {
        return Err(NetworkError::Schema(format!(
            "expected CSV header `{}`, found `{}`",
            expected.join(","),
            found.join(",")
        )));
    }
    Ok(())
}

fn csv_reader<R: Read>(source: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source)
}

fn read_edges_csv<R: Read>(source: R) -> Result<Vec<Edge>, NetworkError> {
    let mut reader = csv_reader(source);
    check_header(&mut reader, &EDGE_HEADER)?;
    reader.deserialize().map(|row| row.map_err(classify_csv)).collect()
}

fn read_facilities_csv<R: Read>(source: R) -> Result<Vec<Facility>, NetworkError> {
    let mut reader = csv_reader(source);
    check_header(&mut reader, &FACILITY_HEADER)?;
    reader
        .deserialize::<FacilityRow>()
        .map(|row| {
            let row = row.map_err(classify_csv)?;
            Ok(Facility {
                id: row.id,
                kind: row.kind,
                can_remanufacture: row.can_remanufacture,
                manufacturing_capacity: row.manufacturing_capacity,
                remanufacturing_capacity: row.remanufacturing_capacity,
                label: row.label.filter(|l| !l.is_empty()),
            })
        })
        .collect()
}

impl ClscNetwork {
    /// Pretty-printed JSON in the `NetworkFile` schema. Output is fully
    /// determined by the network contents.
    pub fn to_json(&self) -> String {
        let mut out =
            serde_json::to_string_pretty(&NetworkFile::from(self)).expect("network serialization cannot fail");
        out.push('\n');
        out
    }

    pub fn write_json<W: Write>(&self, mut sink: W) -> std::io::Result<()> {
        sink.write_all(self.to_json().as_bytes())
    }

    /// Writes the edge list and the facility table as two CSV streams.
    pub fn write_csv<W1: Write, W2: Write>(&self, edges: W1, facilities: W2) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(edges);
        for e in &self.edges {
            w.serialize(e)?;
        }
        if self.edges.is_empty() {
            w.write_record(EDGE_HEADER)?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_writer(facilities);
        for f in &self.facilities {
            w.serialize(FacilityRow {
                id: f.id.clone(),
                kind: f.kind,
                can_remanufacture: f.can_remanufacture,
                manufacturing_capacity: f.manufacturing_capacity,
                remanufacturing_capacity: f.remanufacturing_capacity,
                label: f.label.clone(),
            })?;
        }
        if self.facilities.is_empty() {
            w.write_record(FACILITY_HEADER.iter().chain(&["label"]))?;
        }
        w.flush()?;
        Ok(())
    }
}
