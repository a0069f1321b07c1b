"""Utils package"""
from .config import config, Config
from .log import setup_logging

__all__ = ["config", "Config", "setup_logging"]
