"""
Utility Functions Module
Input validation and small numeric helpers shared across the simulator.
"""

import gc
import json
import math
import os
from typing import List, Optional, Dict, Any, Union

import numpy as np

TWO_PI = 2.0 * math.pi


def cleanup_resources() -> None:
    """Force garbage collection after large Monte Carlo batches."""
    gc.collect()


def validate_numeric_input(value: Union[str, float, int],
                           min_val: float = 0.0,
                           max_val: Optional[float] = None,
                           name: str = "value") -> float:
    """
    Validate and convert numeric input with proper error handling.

    Args:
        value: Input value to validate
        min_val: Minimum allowed value
        max_val: Maximum allowed value (optional)
        name: Field name used in error messages

    Returns:
        float: Validated numeric value

    Raises:
        ValueError: If validation fails
    """
    try:
        if isinstance(value, str):
            numeric_value = float(value.strip())
        else:
            numeric_value = float(value)
    except (ValueError, TypeError, AttributeError) as e:
        raise ValueError(f"Invalid numeric input for {name} '{value}': {str(e)}")

    if not math.isfinite(numeric_value):
        raise ValueError(f"{name} must be finite, got {numeric_value}")

    if numeric_value < min_val:
        raise ValueError(f"{name} {numeric_value} is below minimum {min_val}")

    if max_val is not None and numeric_value > max_val:
        raise ValueError(f"{name} {numeric_value} exceeds maximum {max_val}")

    return numeric_value


def validate_positive_int(value: Union[str, float, int], name: str = "value",
                          min_val: int = 1) -> int:
    """
    Validate an integer-valued input.

    Raises:
        ValueError: If the value is not an integer or is below min_val
    """
    if isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    try:
        integer_value = int(value)
    except (ValueError, TypeError) as e:
        raise ValueError(f"Invalid integer input for {name} '{value}': {str(e)}")
    if integer_value != float(value):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if integer_value < min_val:
        raise ValueError(f"{name} {integer_value} is below minimum {min_val}")
    return integer_value


def validate_string_input(value: str,
                          allowed_values: Optional[List[str]] = None,
                          min_length: int = 1) -> str:
    """
    Validate string input, returning the upper-cased value when a choice list is given.

    Raises:
        ValueError: If validation fails
    """
    if not isinstance(value, str):
        raise ValueError("Input must be a string")

    clean_value = value.strip()
    if len(clean_value) < min_length:
        raise ValueError(f"String too short (minimum {min_length} characters)")

    if allowed_values:
        upper = clean_value.upper()
        if upper not in [v.upper() for v in allowed_values]:
            raise ValueError(f"Value '{clean_value}' not in allowed values: {allowed_values}")
        return upper

    return clean_value


def integer_sqrt(value: int, name: str = "grid size") -> int:
    """
    Return the integer square root of a perfect square.

    Raises:
        ValueError: If value is not a positive perfect square
    """
    value = validate_positive_int(value, name)
    root = math.isqrt(value)
    if root * root != value:
        raise ValueError(f"{name} {value} is not a perfect square")
    return root


def wrap_phase(phases: Union[float, np.ndarray]) -> np.ndarray:
    """Wrap phases to [0, 2*pi)."""
    wrapped = np.mod(np.asarray(phases, dtype=float), TWO_PI)
    # np.mod can round tiny negatives up to exactly 2*pi
    return np.where(wrapped >= TWO_PI, 0.0, wrapped)


def ensure_directory(directory_path: str) -> bool:
    """
    Ensure directory exists, create if necessary.

    Args:
        directory_path: Path to directory (empty string means current directory)

    Returns:
        bool: True if directory exists or was created
    """
    if not directory_path:
        return True
    try:
        os.makedirs(directory_path, exist_ok=True)
        return True
    except OSError as e:
        print(f"❌ Failed to create directory {directory_path}: {str(e)}")
        return False


def save_json_file(data: Dict[str, Any], filepath: str) -> bool:
    """
    Save data to JSON file.

    Returns:
        bool: True if saved successfully
    """
    try:
        ensure_directory(os.path.dirname(filepath))
        with open(filepath, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, sort_keys=True)
        return True
    except (OSError, TypeError) as e:
        print(f"❌ Failed to save JSON file {filepath}: {str(e)}")
        return False


def load_json_file(filepath: str) -> Optional[Dict[str, Any]]:
    """
    Load data from JSON file.

    Returns:
        Dict or None: Loaded data or None if missing or unreadable
    """
    try:
        if not os.path.exists(filepath):
            return None
        with open(filepath, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        print(f"❌ Failed to load JSON file {filepath}: {str(e)}")
        return None
