from pathlib import Path
import logging

from sympy import isprime

from ..errors import (
    BadParameterError,
    ConfigurationError,
    NotPrimeError,
)


def file_exists_and_is_file(file_path: Path):
    """Raise ConfigurationError unless the file exists and is a file."""
    if not (file_path.exists() and file_path.is_file()):
        logging.error(f"{file_path} does not exist or is not a file.")
        raise ConfigurationError(f"{file_path} does not exist or is not a file.")


def file_check_extension(file_path: Path, valid_extensions: list):
    """Check if the file has a valid extension."""
    if file_path.suffix not in valid_extensions:
        logging.error(f"{file_path} should have a valid extension of {valid_extensions}.")
        raise ConfigurationError(f"{file_path} should have a valid extension of {valid_extensions}.")


def validate_yaml_file(file_path: str | Path) -> Path:
    """
    Validates that the YAML file exists and has a YAML extension.

    Args:
        file_path (str): Path to the file to validate.

    Returns:
        Path: Path object of the file.
    """
    file_path = Path(file_path)
    file_exists_and_is_file(file_path)
    file_check_extension(file_path, [".yaml", ".yml", ".YAML", ".YML"])
    return file_path


def validate_prime(p: int) -> int:
    if not isinstance(p, (int,)) or isinstance(p, bool) or not isprime(p):
        logging.error(f"{p=} is not a prime")
        raise NotPrimeError(f"{p} is not a prime")
    return int(p)


def validate_positive_int(name: str, value, minimum: int = 1) -> int:
    """Parameters of constructors and searches are integers >= minimum."""
    if isinstance(value, bool) or not isinstance(value, (int,)):
        try:
            as_int = int(value)
        except (TypeError, ValueError):
            logging.error(f"{name}={value!r} is not an integer")
            raise BadParameterError(f"{name}={value!r} is not an integer")
        if as_int != value:
            raise BadParameterError(f"{name}={value!r} is not an integer")
        value = as_int
    if value < minimum:
        logging.error(f"{name}={value} should be at least {minimum}")
        raise BadParameterError(f"{name}={value} should be at least {minimum}")
    return int(value)
