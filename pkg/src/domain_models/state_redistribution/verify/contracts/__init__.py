from .base_checker import BaseChecker
