"""
Configuration management for the cache simulator.

This module provides process-level settings read from environment variables
(optionally loaded from a ``.env`` file by the command line).
"""

import os
from typing import Optional


class SimulatorConfig:
    """Configuration class for simulator settings."""

    # Subdirectory names used under the output directory
    OUTPUT_LAYOUT = {
        "traces": "traces",
        "runs": "runs",
        "comparisons": "comparisons",
    }

    def __init__(self):
        """Initialize configuration from environment variables or defaults."""
        self.reload()

    def reload(self):
        """Re-read the environment (e.g. after a .env file was loaded)."""
        self.log_level = os.getenv("POPCACHE_LOG_LEVEL", "INFO")
        self.log_file: Optional[str] = os.getenv("POPCACHE_LOG_FILE") or None
        self.output_dir = os.getenv("POPCACHE_OUTPUT_DIR", "results")
        self.workers = int(os.getenv("POPCACHE_WORKERS", "1"))
        self.progress = os.getenv("POPCACHE_PROGRESS", "false").lower() == "true"

    def output_path(self, kind: str, name: str) -> str:
        """
        Build a default output path for a given kind of artifact.

        Args:
            kind: One of 'traces', 'runs', 'comparisons'
            name: File name or stem

        Returns:
            Path under the configured output directory

        Raises:
            KeyError: If kind is not known
        """
        return os.path.join(self.output_dir, self.OUTPUT_LAYOUT[kind], name)

    def __repr__(self):
        return (
            f"SimulatorConfig(log_level='{self.log_level}', "
            f"output_dir='{self.output_dir}', workers={self.workers}, "
            f"progress={self.progress})"
        )


# Global configuration instance
config = SimulatorConfig()
