package minisdk

type Client struct {
	roots     []Root
	connected bool
	wire      *Wire
}

func (c *Client) SetRoots(roots []Root) {
	c.roots = roots
	if c.connected {
		c.sendRootsListChanged()
	}
}

func (c *Client) sendRootsListChanged() {
	c.wire.Push(Frame{Kind: "roots"})
}
