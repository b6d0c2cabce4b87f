#  Copyright 2024 Amazon.com, Inc. or its affiliates.

import time
from typing import Callable, Optional

import gevent


class TokenBucket:
    """
    Token-bucket limiter shared by the greenlets of one panel extraction.

    :param rate_per_sec: Refill rate.
    :param capacity: Burst size; defaults to one second of tokens (at least one).
    :param clock: Monotonic clock, injectable for tests.
    :param sleep: Cooperative sleep, injectable for tests.
    """

    def __init__(
        self,
        rate_per_sec: float,
        capacity: Optional[float] = None,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = gevent.sleep,
    ):
        if rate_per_sec <= 0:
            raise ValueError("rate_per_sec must be positive")
        self.rate = float(rate_per_sec)
        self.capacity = float(capacity) if capacity is not None else max(1.0, self.rate)
        self._clock = clock
        self._sleep = sleep
        self._tokens = self.capacity
        self._stamp = clock()

    def _refill(self) -> None:
        now = self._clock()
        self._tokens = min(self.capacity, self._tokens + (now - self._stamp) * self.rate)
        self._stamp = now

    def acquire(self, tokens: float = 1.0) -> float:
        """
        Block until ``tokens`` are available and consume them.

        :return: Total time slept.
        """
        waited = 0.0
        self._refill()
        while self._tokens < tokens:
            delay = (tokens - self._tokens) / self.rate
            self._sleep(delay)
            waited += delay
            self._refill()
        self._tokens -= tokens
        return waited
