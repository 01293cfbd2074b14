"""Architecture and training hyperparameters of the frame forecaster."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class PredictorConfig:
    """Shapes and knobs of the convolutional-recurrent forecaster.

    The encoder stacks ``layers`` blocks of (valid SxS convolution, ReLU,
    non-overlapping max-pool of ``pool``); each block must tile exactly:
    ``(side - kernel + 1)`` divisible by ``pool``.  The decoder mirrors the
    stack with switch unpooling and full convolutions.  ``feature_maps``
    gives the channel count after each encoder block.
    """

    grid_side: int = 32
    layers: int = 2
    kernel: int = 5
    pool: int = 2
    feature_maps: tuple[int, ...] = (4, 8)
    hidden: int = 32
    seq_len: int = 8
    learn_rate: float = 1e-3
    epochs: int = 100
    init_scale: float = 0.08

    def __post_init__(self):
        if self.layers < 1:
            raise ValueError("need at least one encoder layer")
        if len(self.feature_maps) != self.layers:
            raise ValueError(
                f"feature_maps has {len(self.feature_maps)} entries for {self.layers} layers"
            )
        if min(self.feature_maps) < 1 or self.kernel < 1 or self.pool < 1:
            raise ValueError("feature_maps, kernel and pool must be positive")
        if self.hidden < 1 or self.seq_len < 1 or self.epochs < 0:
            raise ValueError("hidden, seq_len must be positive; epochs nonnegative")
        self.pooled_sizes()  # raises if the stack does not tile

    def conv_sizes(self) -> list[int]:
        """Map side after each valid convolution (before pooling)."""
        sizes = []
        side = self.grid_side
        for _ in range(self.layers):
            side = side - self.kernel + 1
            if side < 1:
                raise ValueError("kernel larger than the remaining map")
            sizes.append(side)
            side //= self.pool
        return sizes

    def pooled_sizes(self) -> list[int]:
        """Map side after each pool step; validates exact tiling."""
        sizes = []
        side = self.grid_side
        for layer in range(self.layers):
            side = side - self.kernel + 1
            if side < 1:
                raise ValueError(
                    f"layer {layer}: kernel {self.kernel} larger than map of side {side + self.kernel - 1}"
                )
            if side % self.pool:
                raise ValueError(
                    f"layer {layer}: map of side {side} not divisible by pool {self.pool}"
                )
            side //= self.pool
            sizes.append(side)
        return sizes

    def feature_len(self) -> int:
        """Length N of the flattened encoder output."""
        return self.pooled_sizes()[-1] ** 2 * self.feature_maps[-1]
