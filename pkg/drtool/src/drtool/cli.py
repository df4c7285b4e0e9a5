"""Command line for the reference DR tool server."""

from __future__ import annotations

import argparse
import sys
import threading

from .server import serve_dr


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(prog="drtool", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="serve embeddings of a CSV dataset on the wire protocol")
    serve.add_argument("--data", required=True, help="CSV path (rows = samples)")
    serve.add_argument("--method", choices=("tsne", "umap"), default="umap")
    serve.add_argument("--label-column", default=None,
                       help="column withheld from the wire (kept for offline evaluation only)")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8970)

    args = parser.parse_args(argv)
    server, _ = serve_dr(args.data, host=args.host, port=args.port,
                         method=args.method, label_column=args.label_column)
    host, port = server.server_address[0], server.server_address[1]
    print(f"dr tool ({args.method}) on http://{host}:{port}")
    try:
        threading.Event().wait()
    except KeyboardInterrupt:
        server.shutdown()
        sys.exit(0)


if __name__ == "__main__":
    main()
