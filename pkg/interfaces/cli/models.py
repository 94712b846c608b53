"""
Pydantic models for the JSON documents the CLI reads.

One document per run, discriminated on `kind`:
channel (Gaussian gains), geometry (node positions, optional sweep block)
or dm_channel (discrete memoryless law and lattice settings).
"""
import math
from pathlib import Path
from typing import Annotated, Any, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    TypeAdapter,
    field_validator,
    model_validator,
)

from core.config import settings
from core.dm import (
    AuxCardinalities,
    DiscreteMemorylessChannel,
    InnerAuxDistribution,
    InnerBoundForm,
    OuterAuxDistribution,
)
from core.dm.channel import check_stochastic
from core.gaussian import GaussianMacChannel, LowerBoundForm, NetworkGeometry
from pipelines.sweep_pipeline import SweepConfig

# Tables written with nine significant digits must re-parse; rows within this
# distance of 1 are renormalized, anything further is rejected.
DOCUMENT_ROW_TOL = 1e-6


def _parse_c12(value: Any) -> Any:
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity"):
        return math.inf
    return value


C12 = Annotated[
    float,
    BeforeValidator(_parse_c12),
    Field(ge=0),
    PlainSerializer(lambda v: "inf" if math.isinf(v) else v, when_used="json"),
]
Point = Tuple[float, float]


def _as_table(value: Any) -> List[Any]:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"not a rectangular numeric table ({exc})") from exc
    if arr.ndim == 0:
        raise ValueError("expected a nested list, got a scalar")
    return value


Table = Annotated[List[Any], BeforeValidator(_as_table)]


def _normalized(name: str, value: List[Any], event_axes: int = 1) -> np.ndarray:
    arr = check_stochastic(name, np.asarray(value, dtype=float), event_axes, tol=DOCUMENT_ROW_TOL)
    axes = tuple(range(arr.ndim - event_axes, arr.ndim))
    return arr / arr.sum(axis=axes, keepdims=True)


class Document(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ---------------------------------------------------------------------------
# Gaussian documents
# ---------------------------------------------------------------------------

class ChannelDoc(Document):
    """Explicit Gaussian MAC wiretap gains, noise variances and powers."""
    kind: Literal["channel"]
    h1d: float
    h2d: float
    h1e: float
    h2e: float
    sigma1_sq: float = Field(..., gt=0)
    sigma2_sq: float = Field(..., gt=0)
    p1: float = Field(default=1.0, ge=0)
    p2: float = Field(default=1.0, ge=0)
    c12: C12 = 0.0
    form: LowerBoundForm = LowerBoundForm.CHARGED

    def to_channel(self) -> GaussianMacChannel:
        return GaussianMacChannel(
            h1d=self.h1d, h2d=self.h2d, h1e=self.h1e, h2e=self.h2e,
            sigma1_sq=self.sigma1_sq, sigma2_sq=self.sigma2_sq,
            p1=self.p1, p2=self.p2, c12=self.c12,
        )


class SweepDoc(Document):
    start: float = 0.0
    stop: float = 2.0
    step: float = Field(default=0.05, gt=0)
    c12_list: List[C12] = Field(default_factory=lambda: [0.0, 1.0, 4.0, 6.0], min_length=1)
    include_wiretap_baseline: bool = True
    enc2_y: float = 0.0

    @model_validator(mode="after")
    def start_before_stop(self):
        if self.start > self.stop:
            raise ValueError(f"start ({self.start}) must not exceed stop ({self.stop})")
        return self


class GeometryDoc(Document):
    """Node positions with path-loss gains; defaults are the line network with unit powers."""
    kind: Literal["geometry"]
    pos_enc1: Point = (0.0, 0.0)
    pos_enc2: Point = (0.5, 0.0)
    pos_dest: Point = (1.0, 0.0)
    pos_eave: Point = (1.5, 0.0)
    gamma: float = Field(default=2.0, gt=0)
    p1: float = Field(default=1.0, ge=0)
    p2: float = Field(default=1.0, ge=0)
    sigma1_sq: float = Field(default=1.0, gt=0)
    sigma2_sq: float = Field(default=1.0, gt=0)
    c12: C12 = 0.0
    min_distance: float = Field(default=settings.MIN_DISTANCE, gt=0)
    form: LowerBoundForm = LowerBoundForm.CHARGED
    label: str = "sweep"
    sweep: Optional[SweepDoc] = None

    def to_geometry(self) -> NetworkGeometry:
        return NetworkGeometry(
            pos_enc1=self.pos_enc1, pos_enc2=self.pos_enc2,
            pos_dest=self.pos_dest, pos_eave=self.pos_eave,
            gamma=self.gamma, p1=self.p1, p2=self.p2,
            sigma1_sq=self.sigma1_sq, sigma2_sq=self.sigma2_sq,
            c12=self.c12, min_distance=self.min_distance,
        )

    def sweep_config(self) -> SweepConfig:
        block = self.sweep or SweepDoc()
        return SweepConfig(
            geometry=self.to_geometry(),
            start=block.start,
            stop=block.stop,
            step=block.step,
            c12_list=tuple(block.c12_list),
            include_wiretap_baseline=block.include_wiretap_baseline,
            enc2_y=block.enc2_y,
            label=self.label,
        )


# ---------------------------------------------------------------------------
# Discrete memoryless documents
# ---------------------------------------------------------------------------

class CardsDoc(Document):
    n_u: int = Field(default=2, ge=1)
    n_v: int = Field(default=2, ge=1)
    n_v1: Optional[int] = Field(default=None, ge=1)
    n_v2: Optional[int] = Field(default=None, ge=1)
    identity_prefix: bool = False


class InnerDistributionDoc(Document):
    kind: Literal["inner"]
    p_u: Table
    p_v_u: Table
    p_v1: Table
    p_v2: Table
    p_x1: Table
    p_x2: Table

    def to_distribution(self) -> InnerAuxDistribution:
        return InnerAuxDistribution(**{
            name: _normalized(name, getattr(self, name))
            for name in ("p_u", "p_v_u", "p_v1", "p_v2", "p_x1", "p_x2")
        })


class OuterDistributionDoc(Document):
    kind: Literal["outer"]
    p_u: Table
    p_v1v2_u: Table
    p_x1x2: Table

    def to_distribution(self) -> OuterAuxDistribution:
        return OuterAuxDistribution(
            p_u=_normalized("p_u", self.p_u),
            p_v1v2_u=_normalized("p_v1v2_u", self.p_v1v2_u, event_axes=2),
            p_x1x2=_normalized("p_x1x2", self.p_x1x2, event_axes=2),
        )


DistributionDoc = Annotated[Union[InnerDistributionDoc, OuterDistributionDoc], Field(discriminator="kind")]


class DmChannelDoc(Document):
    """law[x1][x2][y][z] = p(y, z | x1, x2)."""
    kind: Literal["dm_channel"]
    law: Table
    c12: C12 = 0.0
    cards: CardsDoc = Field(default_factory=CardsDoc)
    identity_prefix: bool = False
    grid_step: float = Field(default=0.125, gt=0, le=1)
    budget: Optional[int] = Field(default=None, ge=1)
    truncate: bool = False
    include_factorized: bool = True
    form: InnerBoundForm = InnerBoundForm.CHARGED
    distribution: Optional[DistributionDoc] = None

    @field_validator("law")
    @classmethod
    def law_has_four_axes(cls, value):
        ndim = np.asarray(value, dtype=float).ndim
        if ndim != 4:
            raise ValueError(f"law needs 4 axes (x1, x2, y, z), got {ndim}")
        return value

    def to_channel(self) -> DiscreteMemorylessChannel:
        return DiscreteMemorylessChannel(_normalized("law", self.law, event_axes=2))

    def cardinalities(self) -> AuxCardinalities:
        return AuxCardinalities(
            n_u=self.cards.n_u, n_v=self.cards.n_v,
            n_v1=self.cards.n_v1, n_v2=self.cards.n_v2,
            identity_prefix=self.cards.identity_prefix or self.identity_prefix,
        )


ConfigDoc = Annotated[Union[ChannelDoc, GeometryDoc, DmChannelDoc], Field(discriminator="kind")]
CONFIG_ADAPTER: TypeAdapter = TypeAdapter(ConfigDoc)


def parse_config(text: Union[str, bytes]) -> Union[ChannelDoc, GeometryDoc, DmChannelDoc]:
    """Validate one JSON document; raises pydantic.ValidationError."""
    return CONFIG_ADAPTER.validate_json(text)


def dump_config(doc: BaseModel) -> Any:
    """JSON-mode dump that re-parses under parse_config."""
    return doc.model_dump(mode="json")


class RunConfig(BaseModel):
    """One CLI invocation after flag parsing."""
    mode: Literal["bounds", "sweep", "dm-inner", "dm-outer", "dm-frontier", "special", "self-check"]
    input: Optional[Path] = None
    output: str = settings.OUTPUT_PREFIX
    grid_steps: Optional[int] = Field(default=None, ge=2)
    refine_rounds: Optional[int] = Field(default=None, ge=0)
    budget: Optional[int] = Field(default=None, ge=1)
    svg: bool = False
    threads: Optional[int] = Field(default=None, ge=0)
    seed: int = 0
    samples: int = Field(default=20, ge=1)
