from __future__ import annotations

from typing import Any, Optional, Tuple


class MetamodelError(ValueError):
    """Base class for every error raised by the modelling engine."""


class ConstraintError(MetamodelError):
    pass


class RegimeError(MetamodelError):
    pass


class BindingError(MetamodelError):
    def __init__(self, kind: str, message: Optional[str] = None) -> None:
        self.kind = kind
        super().__init__(message or f"no concrete binding for {kind}")


class ValidationError(MetamodelError):
    pass


class PreconditionError(MetamodelError):
    pass


class UndefinedTransitionError(MetamodelError):
    def __init__(
        self,
        neighborhood: Tuple[Any, ...],
        entity: Optional[int] = None,
        time_step: Optional[int] = None,
    ) -> None:
        self.neighborhood = neighborhood
        self.entity = entity
        self.time_step = time_step
        super().__init__(self._message())

    def at(self, entity: Optional[int] = None, time_step: Optional[int] = None) -> "UndefinedTransitionError":
        return UndefinedTransitionError(
            self.neighborhood,
            entity=entity if entity is not None else self.entity,
            time_step=time_step if time_step is not None else self.time_step,
        )

    def _message(self) -> str:
        parts = [f"undefined transition for neighborhood {self.neighborhood!r}"]
        if self.entity is not None:
            parts.append(f"entity={self.entity}")
        if self.time_step is not None:
            parts.append(f"t={self.time_step}")
        return " ".join(parts)


class DimensionError(MetamodelError):
    pass


class RangeError(MetamodelError):
    pass


class SizeError(MetamodelError):
    pass


class DomainError(MetamodelError):
    pass


class CapabilityError(MetamodelError):
    pass


class FormatError(MetamodelError):
    """A model, trajectory, network, dataset or log file could not be parsed."""
