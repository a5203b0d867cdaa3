# -*- coding: utf-8 -*-
#
# assetchannel documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing
# dir.

import sys, os

# If extensions (or modules to document with autodoc) are in another directory,
# add these directories to sys.path here.
sys.path.insert(0, os.path.abspath('..'))

# -- General configuration -----------------------------------------------------

# Sphinx extension module names.
extensions = ['sphinx.ext.autodoc', 'sphinx.ext.doctest', 'sphinx.ext.mathjax']

# Add any paths that contain templates here, relative to this directory.
templates_path = ['_templates']

# The suffix of source filenames.
source_suffix = '.rst'

# The master toctree document.
master_doc = 'index'

# General information about the project.
project = u'assetchannel'
copyright = u'2024, the assetchannel authors'

# The short X.Y version and the full version, including alpha/beta/rc tags.
from assetchannel import __version__ as version
release = version

# List of patterns, relative to source directory, that match files and
# directories to ignore when looking for source files.
exclude_patterns = ['_build']

# The name of the Pygments (syntax highlighting) style to use.
pygments_style = 'sphinx'

# Doctests print floats the way numpy does.
doctest_global_setup = 'import numpy as np'

# -- Options for HTML output ---------------------------------------------------

html_theme = 'alabaster'
html_static_path = []
htmlhelp_basename = 'assetchanneldoc'

# -- Options for LaTeX output --------------------------------------------------

latex_documents = [
  ('index', 'assetchannel.tex', u'assetchannel Documentation',
   u'the assetchannel authors', 'manual'),
]

# -- Options for manual page output --------------------------------------------

man_pages = [
    ('index', 'assetchannel', u'assetchannel Documentation',
     [u'the assetchannel authors'], 1)
]
