"""Progress logging for long selection sweeps."""
import logging
import time
from collections.abc import Iterable, Iterator
from typing import TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")

_UNITS = (("d", 86400), ("h", 3600), ("m", 60), ("s", 1))


def human_time(seconds: float) -> str:
    # millisecond precision below 2 seconds
    if seconds < 2:
        return f"{int(seconds * 1000)}ms"
    remaining = int(seconds)
    parts = []
    for unit, size in _UNITS:
        count, remaining = divmod(remaining, size)
        if count:
            parts.append(f"{count}{unit}")
    return " ".join(parts)


class ProgressReporter:
    """Logs `processed/total` with an ETA at most once per `interval` seconds."""

    def __init__(self, total: int, label: str, interval: float) -> None:
        self.total = total
        self.label = label
        self.interval = interval
        self._started = time.monotonic()
        self._next_report = self._started + interval

    def eta(self, processed: int) -> str:
        elapsed = time.monotonic() - self._started
        if processed == 0 or elapsed <= 0:
            return "(computing)"
        rate = processed / elapsed
        return f"{human_time((self.total - processed) / rate)} @ {int(rate * 60)}/min"

    def update(self, processed: int) -> None:
        now = time.monotonic()
        if now < self._next_report:
            return
        self._next_report = now + self.interval
        logger.info(
            "%s %s/%s - ETA %s", self.label, processed, self.total, self.eta(processed)
        )

    def elapsed(self) -> str:
        return human_time(time.monotonic() - self._started)


def track(
    items: Iterable[T], total: int, label: str, interval: float
) -> Iterator[T]:
    """Yield from `items`, reporting progress as they are consumed."""
    reporter = ProgressReporter(total, label, interval)
    processed = 0
    for item in items:
        yield item
        processed += 1
        reporter.update(processed)
    logger.debug("%s done: %s items in %s", label, processed, reporter.elapsed())
