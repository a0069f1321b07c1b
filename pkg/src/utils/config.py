"""
Configuration management for the ASURA placement toolkit
"""

import os

from dotenv import load_dotenv
from loguru import logger

# Load environment variables
load_dotenv()


class Config:
    """Application configuration"""

    # ASURA cascade
    ASURA_DEFAULT_MAX_RANDOM: int = int(os.getenv("ASURA_DEFAULT_MAX_RANDOM", "16"))
    ASURA_EXTENSION_LIMIT: int = int(os.getenv("ASURA_EXTENSION_LIMIT", "20"))

    # Baselines and cluster maps
    PLACEMENT_VNODES: int = int(os.getenv("PLACEMENT_VNODES", "100"))
    PLACEMENT_CAPACITY_UNIT: float = float(os.getenv("PLACEMENT_CAPACITY_UNIT", "1.0"))

    # Experiments
    PLACEMENT_SEED: int = int(os.getenv("PLACEMENT_SEED", "0"))

    # Application settings
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "WARNING")

    @classmethod
    def validate(cls) -> bool:
        """Validate that configuration values are usable"""
        errors = []

        s = cls.ASURA_DEFAULT_MAX_RANDOM
        if s < 1 or s & (s - 1):
            errors.append("ASURA_DEFAULT_MAX_RANDOM must be a power of two >= 1")
        if cls.ASURA_EXTENSION_LIMIT < 1:
            errors.append("ASURA_EXTENSION_LIMIT must be >= 1")
        if cls.PLACEMENT_VNODES < 1:
            errors.append("PLACEMENT_VNODES must be >= 1")
        if cls.PLACEMENT_CAPACITY_UNIT <= 0:
            errors.append("PLACEMENT_CAPACITY_UNIT must be > 0")

        for error in errors:
            logger.error("Configuration error: {}", error)

        return not errors


# Create a singleton instance
config = Config()
