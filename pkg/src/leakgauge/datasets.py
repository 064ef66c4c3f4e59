"""The three public datasets of the reference evaluation and offline stand-ins.

The originals are Kaggle downloads and are not shipped. ``standin``
returns synthetic integer scores with the same record count so the
evaluation runs offline; ``download_command`` prints how to fetch the
real file for a manual run.
"""

from __future__ import annotations

from dataclasses import dataclass

from .data_io import SymbolicSeries, synth_random_ints
from .errors import DataError


@dataclass(frozen=True)
class PaperDataset:
    name: str
    m: int
    n: int
    kaggle: str


PAPER_DATASETS = (
    PaperDataset("Sensor readings", 944, 11, "umerrtx/machine-failure-prediction-using-sensor-data"),
    PaperDataset("Customer purchases", 1500, 10, "rabieelkharoua/predict-customer-purchase-behavior-dataset"),
    PaperDataset("Employee attrition", 1000, 9, "mrsimple07/employee-attrition-data-prediction"),
)


def lookup(name: str) -> PaperDataset:
    for ds in PAPER_DATASETS:
        if ds.name.lower() == name.lower():
            return ds
    raise DataError(f"unknown dataset {name!r}; known: {[d.name for d in PAPER_DATASETS]}")


def download_command(name: str, dest: str = "data") -> str:
    ds = lookup(name)
    return f"kaggle datasets download -d {ds.kaggle} -p {dest} --unzip"


def standin(name: str, seed: int = 0) -> SymbolicSeries:
    ds = lookup(name)
    return synth_random_ints(ds.m, 1, 100, seed)
