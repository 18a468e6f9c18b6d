#!/usr/bin/env python3
"""
Quick benchmark script for pre-commit hook.
Times package import, model construction and one training step of the default network.
"""

import json
import sys
import time
from pathlib import Path
from typing import Any

BATCH_SIZE = 64
WINDOW_LENGTH = 50
CHANNELS = 3
CLASSES = 8


def quick_import_benchmark() -> float:
    """Benchmark package import time."""
    start = time.perf_counter()
    try:
        import har_chain  # noqa: F401

        return time.perf_counter() - start
    except ImportError as e:
        print(f"Import failed: {e}")
        return float("inf")


def quick_build_benchmark() -> float:
    """Benchmark construction of the default DeepConvLSTM."""
    start = time.perf_counter()
    try:
        from har_chain.model import ModelSpec, build_model

        build_model(ModelSpec(input_channels=CHANNELS, window_length=WINDOW_LENGTH, num_classes=CLASSES))
        return time.perf_counter() - start
    except Exception as e:
        print(f"Model construction failed: {e}")
        return float("inf")


def quick_training_step_benchmark() -> float:
    """Benchmark one forward and backward pass on a full batch."""
    try:
        import numpy as np

        from har_chain.model import ModelSpec, build_model, model_forward
        from har_chain.numcore import softmax_cross_entropy

        model = build_model(ModelSpec(input_channels=CHANNELS, window_length=WINDOW_LENGTH, num_classes=CLASSES))
        generator = np.random.default_rng(0)
        windows = generator.normal(size=(BATCH_SIZE, WINDOW_LENGTH, CHANNELS))
        targets = np.eye(CLASSES)[generator.integers(0, CLASSES, size=BATCH_SIZE)]

        start = time.perf_counter()
        loss = softmax_cross_entropy(model_forward(model, windows), targets)
        loss.backward()
        return time.perf_counter() - start
    except Exception as e:
        print(f"Training step failed: {e}")
        return float("inf")


def run_quick_benchmarks() -> dict[str, Any]:
    """Run quick benchmarks and return results."""
    results: dict[str, Any] = {"timestamp": time.time(), "benchmarks": {}}
    results["benchmarks"]["import_time"] = quick_import_benchmark()
    results["benchmarks"]["build_time"] = quick_build_benchmark()
    results["benchmarks"]["training_step_time"] = quick_training_step_benchmark()
    return results


def check_performance_thresholds(results: dict[str, Any]) -> bool:
    """Check if results exceed performance thresholds."""
    # seconds
    thresholds = {
        "import_time": 2.0,
        "build_time": 1.0,
        "training_step_time": 10.0,
    }

    failures = []
    for benchmark, value in results["benchmarks"].items():
        threshold = thresholds.get(benchmark)
        if threshold is not None and value > threshold:
            failures.append(f"{benchmark}: {value:.3f}s > {threshold}s")

    if failures:
        print("Performance threshold failures:")
        for failure in failures:
            print(f"  - {failure}")
        return False
    return True


def main():
    """Main entry point."""
    print("Running quick performance check...")

    results = run_quick_benchmarks()

    results_file = Path("reports/quick-benchmark.json")
    results_file.parent.mkdir(exist_ok=True)
    with open(results_file, "w") as f:
        json.dump(results, f, indent=2)

    passed = check_performance_thresholds(results)

    print("Quick benchmark results:")
    for name, value in results["benchmarks"].items():
        print(f"  {name}: {value:.3f}s")

    if passed:
        print("✅ Performance check passed")
        sys.exit(0)
    else:
        print("❌ Performance check failed")
        sys.exit(1)


if __name__ == "__main__":
    main()
