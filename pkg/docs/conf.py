# Configuration file for the Sphinx documentation builder.
#
# Only the options tvcnlab changes from the sphinx-quickstart defaults are set here.

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

from tvcnlab import __version__  # noqa: E402

# -- Project information -----------------------------------------------------

project = 'tvcnlab'
copyright = "2026, tvcnlab developers"
author = 'tvcnlab developers'

version = __version__
release = __version__

# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
]

source_suffix = '.rst'
master_doc = 'index'
language = None
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
htmlhelp_basename = 'tvcnlabdoc'

# -- Options for manual page output ------------------------------------------

man_pages = [
    (master_doc, 'tvcnlab', 'tvcnlab Documentation',
     [author], 1)
]
