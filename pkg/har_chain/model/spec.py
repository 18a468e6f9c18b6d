"""Architecture hyperparameters of the DeepConvLSTM variant."""

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Architecture(BaseModel):
    """Data-independent layer sizes.

    The defaults follow the shallow DeepConvLSTM lineage: four convolutions of 64
    filters with kernel length 5 and a single recurrent layer of 128 units.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    conv_layers: int = Field(4, ge=1)
    filters: int = Field(64, ge=1)
    kernel_length: int = Field(5, ge=1)
    hidden: int = Field(128, ge=1)
    lstm_layers: int = Field(1, ge=1)
    seed: int = Field(0, ge=0)


class ModelSpec(Architecture):
    """An :class:`Architecture` bound to input channels, window length and class count."""

    input_channels: int = Field(ge=1)
    window_length: int = Field(ge=1)
    num_classes: int = Field(ge=2)

    @model_validator(mode="after")
    def _window_fits_convolutions(self) -> "ModelSpec":
        if self.conv_output_length < 1:
            raise ValueError(
                f"window length {self.window_length} too short for {self.conv_layers} conv layers "
                f"of kernel {self.kernel_length} ({self.conv_output_length} < 1)"
            )
        return self

    @classmethod
    def from_architecture(
        cls, architecture: Architecture, input_channels: int, window_length: int, num_classes: int
    ) -> "ModelSpec":
        data = architecture.model_dump()
        data.update(input_channels=input_channels, window_length=window_length, num_classes=num_classes)
        return cls(**data)

    @property
    def architecture(self) -> Architecture:
        return Architecture(**{name: getattr(self, name) for name in Architecture.model_fields})

    @property
    def conv_output_length(self) -> int:
        """``T' = W - L * (Kt - 1)``."""
        return self.window_length - self.conv_layers * (self.kernel_length - 1)

    @property
    def lstm_input_size(self) -> int:
        """``D = F * C``."""
        return self.filters * self.input_channels


def expected_parameter_count(spec: ModelSpec) -> int:
    """Closed-form parameter count.

    ``[F*Kt + F] + (L-1)*[F*F*Kt + F] + 4*(H*D + H*H + H) + (H*K + K)`` plus
    ``4*(H*H + H*H + H)`` for every LSTM layer after the first.
    """
    f, kt, h, k = spec.filters, spec.kernel_length, spec.hidden, spec.num_classes
    conv = (f * kt + f) + (spec.conv_layers - 1) * (f * f * kt + f)
    lstm = 4 * (h * spec.lstm_input_size + h * h + h)
    lstm += (spec.lstm_layers - 1) * 4 * (h * h + h * h + h)
    head = h * k + k
    return conv + lstm + head
