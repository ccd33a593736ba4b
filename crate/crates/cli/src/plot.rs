//! Matplotlib scripts that redraw emitted CSVs as S / I / N panels.

use std::io::Write;

use serde::Serialize;

use crate::error::CliError;
use crate::run::RunOutput;

#[derive(Serialize)]
struct PlotRun<'a> {
    label: &'a str,
    csv: &'a str,
    /// Dashed reference levels, CF runs only.
    equilibria: Option<Levels>,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct Levels {
    S: f64,
    I: f64,
    N: f64,
}

const TEMPLATE: &str = r#"#!/usr/bin/env python3
# Generated by fracsis. Redraws the CSVs next to this file.
import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
TITLE = json.loads(@TITLE@)
OUTPUT = json.loads(@OUTPUT@)
RUNS = json.loads(@RUNS@)


def load(name):
    with open(HERE / name, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {key: [float(row[key]) for row in rows] for key in rows[0]}


fig, axes = plt.subplots(3, 1, sharex=True, figsize=(7, 9))
for run in RUNS:
    data = load(run["csv"])
    for ax, name in zip(axes, ("S", "I", "N")):
        if name in data:
            (line,) = ax.plot(data["t"], data[name], label=run["label"])
        else:
            (line,) = ax.plot(data["t"], data[name + "_cf"], label=run["label"] + " CF")
            ax.plot(data["t"], data[name + "_caputo"], linestyle="-.",
                    color=line.get_color(), label=run["label"] + " Caputo")
        if run["equilibria"] is not None:
            ax.axhline(run["equilibria"][name], linestyle="--", linewidth=0.8,
                       color=line.get_color())

for ax, name in zip(axes, ("S(t)", "I(t)", "N(t) = S(t) + I(t)")):
    ax.set_ylabel(name)
    ax.legend(fontsize="small")
axes[-1].set_xlabel("t")
fig.suptitle(TITLE)
fig.tight_layout()
fig.savefig(HERE / OUTPUT, dpi=150)
"#;

/// Writes a script overlaying every run in `runs`; `csv_names[k]` is the
/// file name of run `k`'s CSV relative to the script.
pub fn emit_plot_script<W: Write>(
    mut writer: W,
    title: &str,
    runs: &[RunOutput],
    csv_names: &[String],
    image_name: &str,
) -> Result<(), CliError> {
    assert_eq!(runs.len(), csv_names.len(), "one CSV per run");
    let entries: Vec<PlotRun> = runs
        .iter()
        .zip(csv_names)
        .map(|(run, csv)| PlotRun {
            label: &run.member.label,
            csv,
            equilibria: run.equilibria.map(|e| Levels {
                S: e.s_star,
                I: e.i_star,
                N: e.n_star,
            }),
        })
        .collect();
    let script = TEMPLATE
        .replace("@TITLE@", &py_json(&title))
        .replace("@OUTPUT@", &py_json(&image_name))
        .replace("@RUNS@", &py_json(&entries));
    writer
        .write_all(script.as_bytes())
        .map_err(|e| CliError::io(format!("writing plot script for {title}"), e))
}

/// JSON text wrapped in a string literal; JSON string escapes are valid Python.
fn py_json<T: Serialize + ?Sized>(value: &T) -> String {
    let text = serde_json::to_string(value).expect("plot data serialises");
    serde_json::to_string(&text).expect("string serialises")
}
