//! Solomon-format CVRPTW instances.
//!
//! The layout is the one used by the 1987 benchmark files:
//!
//! ```text
//! C101
//!
//! VEHICLE
//! NUMBER     CAPACITY
//!   25         200
//!
//! CUSTOMER
//! CUST NO.  XCOORD.   YCOORD.    DEMAND   READY TIME  DUE DATE   SERVICE   TIME
//!
//!     0      40         50          0          0       1236          0
//!     1      45         68         10        912        967         90
//! ```
//!
//! Node 0 is the depot. Fields are whitespace separated and blank lines are
//! ignored anywhere in the file.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of the depot in [`Instance::nodes`].
pub const DEPOT: usize = 0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub demand: u32,
    /// Earliest service start.
    pub ready: f64,
    /// Latest arrival.
    pub due: f64,
    pub service: f64,
}

impl Node {
    pub fn window_len(&self) -> f64 {
        self.due - self.ready
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    pub fleet_size: usize,
    pub capacity: u32,
    /// Depot first, then customers in file order.
    pub nodes: Vec<Node>,
}

impl Instance {
    /// Builds an instance and checks its invariants.
    pub fn new(
        name: impl Into<String>,
        fleet_size: usize,
        capacity: u32,
        nodes: Vec<Node>,
    ) -> Result<Self> {
        let inst = Instance {
            name: name.into(),
            fleet_size,
            capacity,
            nodes,
        };
        inst.check()?;
        Ok(inst)
    }

    /// Number of nodes, depot included.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn customers(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn depot(&self) -> &Node {
        &self.nodes[DEPOT]
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        parse_instance(&text)
    }

    /// Writes the instance back out in Solomon layout.
    pub fn to_solomon_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.name);
        out.push_str("\nVEHICLE\nNUMBER     CAPACITY\n");
        let _ = writeln!(out, "  {:<10} {}", self.fleet_size, self.capacity);
        out.push_str("\nCUSTOMER\n");
        out.push_str(
            "CUST NO.  XCOORD.   YCOORD.    DEMAND   READY TIME  DUE DATE   SERVICE   TIME\n\n",
        );
        for n in &self.nodes {
            let _ = writeln!(
                out,
                "{:>5} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
                n.id, n.x, n.y, n.demand, n.ready, n.due, n.service
            );
        }
        out
    }

    fn check(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::Config(format!("{}: {msg}", self.name)));
        if self.nodes.len() < 2 {
            return invalid("an instance needs a depot and at least one customer".into());
        }
        if self.fleet_size == 0 {
            return invalid("fleet size must be positive".into());
        }
        if self.capacity == 0 {
            return invalid("vehicle capacity must be positive".into());
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if n.id != i {
                return invalid(format!("node at position {i} has id {}", n.id));
            }
            if n.due < n.ready || n.due.is_nan() || n.ready.is_nan() {
                return invalid(format!("node {i}: due {} before ready {}", n.due, n.ready));
            }
            if n.service < 0.0 || n.ready < 0.0 {
                return invalid(format!("node {i}: negative time field"));
            }
            if n.demand > self.capacity {
                return invalid(format!(
                    "node {i}: demand {} exceeds capacity {}",
                    n.demand, self.capacity
                ));
            }
        }
        let depot = self.depot();
        if depot.demand != 0 || depot.service != 0.0 {
            return invalid("depot must have zero demand and zero service time".into());
        }
        Ok(())
    }
}

/// Parses a Solomon instance file.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (_, name) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let name = name.to_string();

    expect_keyword(&mut lines, "VEHICLE")?;
    // column titles: NUMBER CAPACITY
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "missing vehicle header"))?;
    if !header.to_ascii_uppercase().starts_with("NUMBER") {
        return Err(Error::parse(
            line,
            format!("expected NUMBER CAPACITY, got {header:?}"),
        ));
    }
    let (line, fleet_line) = lines
        .next()
        .ok_or_else(|| Error::parse(line, "missing vehicle count and capacity"))?;
    let fields: Vec<&str> = fleet_line.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::parse(
            line,
            format!("expected 2 vehicle fields, found {}", fields.len()),
        ));
    }
    let fleet_size: usize = parse_field(line, fields[0], "vehicle number")?;
    let capacity: u32 = parse_field(line, fields[1], "capacity")?;

    let customer_line = expect_keyword(&mut lines, "CUSTOMER")?;
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(customer_line, "missing customer table header"))?;
    if !header.to_ascii_uppercase().starts_with("CUST") {
        return Err(Error::parse(
            line,
            format!("expected customer table header, got {header:?}"),
        ));
    }

    let mut nodes: Vec<Node> = Vec::new();
    let mut last_line = line;
    for (line, row) in lines {
        last_line = line;
        let f: Vec<&str> = row.split_whitespace().collect();
        if f.len() != 7 {
            return Err(Error::parse(
                line,
                format!("expected 7 customer fields, found {}", f.len()),
            ));
        }
        let node = Node {
            id: parse_field(line, f[0], "customer number")?,
            x: parse_field(line, f[1], "x coordinate")?,
            y: parse_field(line, f[2], "y coordinate")?,
            demand: parse_field(line, f[3], "demand")?,
            ready: parse_field(line, f[4], "ready time")?,
            due: parse_field(line, f[5], "due date")?,
            service: parse_field(line, f[6], "service time")?,
        };
        if nodes.iter().any(|n| n.id == node.id) {
            return Err(Error::parse(
                line,
                format!("duplicate customer number {}", node.id),
            ));
        }
        if node.id != nodes.len() {
            return Err(Error::parse(
                line,
                format!(
                    "customer number {} out of sequence, expected {}",
                    node.id,
                    nodes.len()
                ),
            ));
        }
        if node.due < node.ready {
            return Err(Error::parse(
                line,
                format!("due date {} precedes ready time {}", node.due, node.ready),
            ));
        }
        if node.demand > capacity {
            return Err(Error::parse(
                line,
                format!("demand {} exceeds vehicle capacity {capacity}", node.demand),
            ));
        }
        nodes.push(node);
    }
    if nodes.is_empty() {
        return Err(Error::parse(last_line, "empty customer table"));
    }
    if nodes.len() < 2 {
        return Err(Error::parse(
            last_line,
            "customer table has a depot but no customers",
        ));
    }
    if fleet_size == 0 || capacity == 0 {
        return Err(Error::parse(
            last_line,
            "vehicle number and capacity must be positive",
        ));
    }
    Instance::new(name, fleet_size, capacity, nodes)
        .map_err(|e| Error::parse(last_line, e.to_string()))
}

fn expect_keyword<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    keyword: &str,
) -> Result<usize> {
    match lines.next() {
        Some((line, l)) if l.eq_ignore_ascii_case(keyword) => Ok(line),
        Some((line, l)) => Err(Error::parse(line, format!("expected {keyword}, got {l:?}"))),
        None => Err(Error::parse(0, format!("missing {keyword} section"))),
    }
}

fn parse_field<T: std::str::FromStr>(line: usize, field: &str, what: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::parse(line, format!("{what}: {field:?} is not a valid number")))
}
