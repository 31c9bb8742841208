import sys

from credal_rml.cli import main

sys.exit(main())
