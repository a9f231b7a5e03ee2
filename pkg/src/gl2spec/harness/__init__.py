from .report import ExperimentConfig, ExperimentReport, render_table, run, serialize
