from __future__ import annotations

from contextlib import nullcontext
from typing import Any, ContextManager

try:
    from opentelemetry import trace
except Exception:  # pragma: no cover - optional dependency resolution
    trace = None


_TRACER_NAME = "metamodel.core"


def span(name: str, **attributes: Any) -> ContextManager[Any]:
    """Start an OpenTelemetry span, or do nothing when tracing is not installed."""
    if trace is None:
        return nullcontext()
    tracer = trace.get_tracer(_TRACER_NAME)
    return tracer.start_as_current_span(
        name,
        attributes={key: _attribute(value) for key, value in attributes.items()},
    )


def _attribute(value: Any) -> Any:
    if isinstance(value, (bool, int, float, str)):
        return value
    return str(value)
