#!/usr/bin/env python3
# Copyright 2026 The HateMonitor Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Reference embedding backend for the http_* providers.

POST /transformer {"text", "language", "max_tokens"}
  -> {"hidden_states": [layer][token][768]}   (all hidden states, pooled by
                                               the C++ side)
POST /sentence {"text", "language"}
  -> {"embedding": [1024 floats]}

Requires torch + transformers (BERT) and laserembeddings (LASER). Neither the
weights nor these packages ship with the repository.
"""

import argparse
import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer


def load_backends(bert_name):
    import torch
    from laserembeddings import Laser
    from transformers import AutoModel, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(bert_name)
    model = AutoModel.from_pretrained(bert_name, output_hidden_states=True)
    model.eval()
    laser = Laser()

    def transformer(text, max_tokens):
        enc = tokenizer(text, truncation=True, max_length=max_tokens,
                        return_tensors="pt")
        with torch.no_grad():
            out = model(**enc)
        return [h[0].tolist() for h in out.hidden_states]

    def sentence(text, language):
        return laser.embed_sentences([text], lang=language)[0].tolist()

    return transformer, sentence


def make_handler(transformer, sentence):
    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            length = int(self.headers.get("Content-Length", 0))
            try:
                body = json.loads(self.rfile.read(length))
                if self.path == "/transformer":
                    reply = {"hidden_states": transformer(
                        body["text"], int(body.get("max_tokens", 512)))}
                elif self.path == "/sentence":
                    reply = {"embedding": sentence(body["text"],
                                                   body["language"])}
                else:
                    self.send_error(404)
                    return
            except (KeyError, ValueError) as e:
                self.send_error(400, str(e))
                return
            data = json.dumps(reply).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def log_message(self, *args):
            pass

    return Handler


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8765)
    parser.add_argument("--bert", default="bert-base-uncased",
                        help="transformers model name or path")
    args = parser.parse_args()
    transformer, sentence = load_backends(args.bert)
    server = ThreadingHTTPServer((args.host, args.port),
                                 make_handler(transformer, sentence))
    print(f"listening on http://{args.host}:{args.port}", flush=True)
    server.serve_forever()


if __name__ == "__main__":
    main()
