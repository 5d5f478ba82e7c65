"""Chart names accepted on the command line.

``c<l>[t<f>][r<m>]`` is the elliptic model C^l x T^f x R^m, optionally
prefixed with a frame kind (``complex:c2``, ``complex-log:c1r1``);
``rl<l>[t<f>][r<m>]`` is a real log chart and ``s<m>`` a smooth one.
"""

from __future__ import annotations

import re

from ..coords import Chart, ChartError, elliptic_chart, real_log_chart, smooth_chart

_BODY = re.compile(r"(c|rl)(\d+)(?:t(\d+))?(?:r(\d+))?|s(\d+)")
FRAME_KINDS = ("elliptic", "complex", "complex-log")


def resolve_chart(text: str) -> Chart:
    kind = "elliptic"
    body = text.strip()
    if ":" in body:
        kind, body = body.split(":", 1)
        if kind not in FRAME_KINDS:
            raise ChartError(f"unknown frame kind {kind!r} (use one of {', '.join(FRAME_KINDS)})")
    m = _BODY.fullmatch(body)
    if m is None:
        raise ChartError(f"cannot read chart {text!r}; try c1, c2, c1r2, rl1r1 or s2")
    if m.group(5) is not None:
        if kind != "elliptic":
            raise ChartError("smooth charts have no complex frame")
        return smooth_chart(int(m.group(5)), name=body)
    l = int(m.group(2))
    f = int(m.group(3) or 0)
    mm = int(m.group(4) or 0)
    if m.group(1) == "rl":
        if kind != "elliptic":
            raise ChartError("real log charts have no complex frame")
        return real_log_chart(l, m=mm, f=f, name=body)
    chart = elliptic_chart(l, f, mm, name=body)
    return chart if kind == "elliptic" else chart.with_kind(kind)


__all__ = ["resolve_chart"]
