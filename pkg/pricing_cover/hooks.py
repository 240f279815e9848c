"""
Engine event hooks.

This module provides hook factory functions for the engines' hook mapping
(``{"event": [...], "prices": [...]}``) that add cross-cutting concerns like
logging and transcript streaming to a run.
"""

import json
import logging
from typing import Callable, Optional, TextIO

from .functionality.pathprice import PricingScheme
from .functionality.pricing_sim import Transcript, TranscriptEvent
from .model import format_fraction


def create_event_logging_hook(
    logger: Optional[logging.Logger] = None,
) -> Callable[[TranscriptEvent, Transcript], None]:
    """
    Create an event hook that logs every request of a run.

    Args:
        logger: Logger instance to use (defaults to module logger)

    Returns:
        Event hook function
    """
    if logger is None:
        logger = logging.getLogger(__name__)

    def log_event(event: TranscriptEvent, transcript: Transcript) -> None:
        extra = {
            "event_type": "transcript_event",
            "engine": transcript.engine,
            "algorithm": transcript.algorithm,
            "step": event.step,
            "request": event.request,
            "purchase": event.purchase,
            "price": format_fraction(event.price) if event.price is not None else None,
        }
        if event.is_noop:
            logger.debug(f"Step {event.step}: {event.request} already covered", extra=extra)
        else:
            logger.info(
                f"Step {event.step}: {event.request} -> set {event.purchase} at {extra['price']}",
                extra=extra,
            )

    return log_event


def create_price_logging_hook(
    logger: Optional[logging.Logger] = None,
) -> Callable[[int, PricingScheme], None]:
    """
    Create a prices hook that logs each posted pricing at DEBUG.

    Args:
        logger: Logger instance to use (defaults to module logger)

    Returns:
        Prices hook function
    """
    if logger is None:
        logger = logging.getLogger(__name__)

    def log_prices(step: int, pricing: PricingScheme) -> None:
        if not logger.isEnabledFor(logging.DEBUG):
            return
        logger.debug(
            f"Step {step}: posted prices",
            extra={
                "event_type": "posted_prices",
                "step": step,
                "prices": {str(s): format_fraction(p) for s, p in pricing.price.items()},
            },
        )

    return log_prices


def create_transcript_writer_hook(stream: TextIO) -> Callable[[TranscriptEvent, Transcript], None]:
    """Stream one JSON line per request to ``stream`` as the run progresses."""

    def write_event(event: TranscriptEvent, transcript: Transcript) -> None:
        stream.write(json.dumps(event.to_dict()) + "\n")

    return write_event
