"""Figures for suite reports, rendered straight to files."""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .reduction import RuleId
from .suite import SuiteReport


def _save(fig, out_dir: str, name: str) -> str:
    path = os.path.join(out_dir, name)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def rule_coverage_figure(report: SuiteReport, out_dir: str) -> str:
    rules = [r.value for r in RuleId]
    counts = [report.rule_counts.get(r, 0) for r in rules]
    fig, ax = plt.subplots(figsize=(10, 4))
    colors = ["tab:blue" if c > 0 else "tab:red" for c in counts]
    ax.bar(range(len(rules)), counts, color=colors)
    ax.set_xticks(range(len(rules)))
    ax.set_xticklabels(rules, rotation=90, fontsize=7)
    ax.set_ylabel("times enumerated")
    ax.set_title(f"rule coverage ({report.config.calculus.value}, "
                 f"{report.count} terms, seed {report.config.seed})")
    return _save(fig, out_dir, "rule_coverage.png")


def chi_decrease_figure(report: SuiteReport, out_dir: str) -> str:
    fig, ax = plt.subplots(figsize=(5, 5))
    if report.chi_pairs:
        # chi values are exact and can dwarf floats; plot their log10
        before = [math.log10(b) for b, _ in report.chi_pairs]
        after = [math.log10(a) for _, a in report.chi_pairs]
        ax.scatter(before, after, s=12, alpha=0.5)
        top = max(before + after)
        ax.plot([0, top], [0, top], color="tab:red", linewidth=1,
                label="no decrease")
        ax.legend()
    ax.set_xlabel("log10 chi before commutative step")
    ax.set_ylabel("log10 chi after")
    ax.set_title("measure decrease across commutative steps")
    return _save(fig, out_dir, "chi_decrease.png")


def check_outcome_figure(report: SuiteReport, out_dir: str) -> str:
    rows = report.to_rows()
    names = [r[0] for r in rows]
    passed = [r[2] for r in rows]
    failed = [r[3] for r in rows]
    fig, ax = plt.subplots(figsize=(8, 4))
    xs = range(len(names))
    ax.bar(xs, passed, color="tab:green", label="passed")
    ax.bar(xs, failed, bottom=passed, color="tab:red", label="failed")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("individual assertions")
    ax.set_title("check outcomes")
    ax.legend()
    return _save(fig, out_dir, "check_outcomes.png")


def render_report_figures(report: SuiteReport, out_dir: str) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    return [
        rule_coverage_figure(report, out_dir),
        chi_decrease_figure(report, out_dir),
        check_outcome_figure(report, out_dir),
    ]
