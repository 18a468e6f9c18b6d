"""Preprocessing parameters expressed in seconds, converted to samples at run time."""

from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field

from har_chain.preprocess.models import LabelingRule, NormScheme


class PipelineConfig(BaseModel):
    """Preprocessing stage configuration.

    ``target_rate`` of ``None`` keeps each recording's native grid.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    target_rate: Annotated[float, Field(gt=0)] | None = 50.0
    window_seconds: float = Field(1.0, gt=0)
    overlap: float = Field(0.5, ge=0, lt=1)
    scheme: NormScheme = NormScheme.ZSCORE
    labeling: LabelingRule = LabelingRule.MAJORITY

    def window_samples(self, rate: float) -> int:
        """``round(window_seconds * rate)``, at least 1."""
        return max(1, round(self.window_seconds * rate))

    def stride_samples(self, rate: float) -> int:
        """``round(window_samples * (1 - overlap))``, at least 1."""
        return max(1, round(self.window_samples(rate) * (1.0 - self.overlap)))
