"""Текстовые форматы трасс: TSV-строки и поток JSON lines."""

from __future__ import annotations

import json

from psfcoord.explore.simulate import Trace


def format_trace(trace: Trace) -> str:
    """``<шаг> TAB <действие> TAB <нагрузка>`` на строку и итоговая ``#status``."""
    lines = [f"{i}\t{label.name}\t{label.render_payload()}" for i, label in enumerate(trace.labels)]
    lines.append(f"#status {trace.status}")
    return "\n".join(lines) + "\n"


def format_trace_jsonl(trace: Trace) -> str:
    lines = []
    for i, label in enumerate(trace.labels):
        record = {
            "step": i,
            "action": label.name,
            "payload": label.render_payload(),
            "state": trace.states[i + 1] if i + 1 < len(trace.states) else None,
        }
        lines.append(json.dumps(record, ensure_ascii=False))
    lines.append(json.dumps({"status": trace.status}))
    return "\n".join(lines) + "\n"
