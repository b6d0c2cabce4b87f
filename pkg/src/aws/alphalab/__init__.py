#  Copyright 2024 Amazon.com, Inc. or its affiliates.

__version__ = "0.1.0"
