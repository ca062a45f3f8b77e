#!/usr/bin/env python3
"""
Shared helpers for the command-line layer: tracing setup and case tracking.
"""

import os
from typing import Any, Callable, Optional

import opik
from rich.console import Console

OPIK_MODES = ("local", "hosted", "disabled")
OPIK_ENV_VAR = "VF_OPIK_MODE"


def default_opik_mode() -> str:
    mode = os.getenv(OPIK_ENV_VAR, "disabled").strip().lower()
    return mode if mode in OPIK_MODES else "disabled"


def configure_opik(
    opik_mode: str = "disabled",
    project_name: str = "voronoi-forge",
    console: Optional[Console] = None,
) -> bool:
    """
    Configure Opik based on the specified mode.

    Args:
        opik_mode: Opik mode - "local", "hosted", or "disabled"
        project_name: Project name for Opik tracking
        console: Where status lines go (stderr console by default)

    Returns:
        True when verification cases should be traced
    """
    if opik_mode == "disabled":
        return False
    console = console or Console(stderr=True)

    os.environ["OPIK_PROJECT_NAME"] = project_name

    opik_config_path = os.path.expanduser("~/.opik.config")
    if os.path.exists(opik_config_path):
        console.print(
            "✅ Found existing ~/.opik.config file, skipping opik.configure()"
        )
        return True

    try:
        if opik_mode == "local":
            opik.configure(use_local=True)
        else:
            if opik_mode != "hosted":
                console.print(
                    f"⚠️  Unknown Opik mode '{opik_mode}', using hosted mode"
                )
            opik.configure(use_local=False)
        console.print("✅ Opik configured, tracing verification cases")
        return True
    except Exception as e:
        console.print(f"⚠️  Opik configuration failed: {e}")
        console.print("Continuing without Opik tracing...")
        return False


def traced(func: Callable[..., Any], name: str, enabled: bool) -> Callable[..., Any]:
    """Wrap `func` in an Opik span when tracing is on."""
    if not enabled:
        return func
    return opik.track(name=name)(func)
