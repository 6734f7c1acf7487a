"""Allow running the CLI as python -m casvolt."""
import sys

from .cli import main

sys.exit(main())
