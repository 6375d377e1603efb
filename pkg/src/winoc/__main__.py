"""Run the ``winoc`` executable with ``python -m winoc``."""

from winoc.cli import main

raise SystemExit(main())
