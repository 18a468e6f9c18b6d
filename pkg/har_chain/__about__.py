# SPDX-FileCopyrightText: 2025-present Memento RC Mori <claude.rc@gmail.com>
#
# SPDX-License-Identifier: Apache-2.0

__version__ = "0.1.0"
