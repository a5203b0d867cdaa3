# -*- coding: utf-8 -*-
"""
   assetchannel.__about__
   ~~~~~~~~~~~~~~~~~~~~~~
"""
__version__ = '0.1.0'
__license__ = 'BSD'
__author__ = 'assetchannel authors'
__author_email__ = 'assetchannel@users.noreply.github.com'
__url__ = 'https://github.com/assetchannel/assetchannel'
__description__ = ('Panel econometrics of the asset price channel of '
                   'monetary policy')
