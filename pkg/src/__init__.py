#!/usr/bin/env python3
"""
Hammersley process laboratory
"""

__version__ = "0.1.0"
